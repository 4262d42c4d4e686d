"""Recover a solution's jet from its right-hand side.

Two routes share one linear relation.  Going from ``a_{m+1} .. a_{m+k}`` to
``a_{m+k+1}``, the term ``q_{k+1}`` of ``f`` depends on ``a_{m+k+1}`` only
through ``D_k * a_{m+k+1}`` (see :func:`jetrec.forward.divisor`).  So each
stage runs the forward map on the partial jet with ``a_{m+k+1} = 0`` and
divides the remaining gap by ``D_k``.

The symbolic route reads ``q_j`` straight off a :class:`PuiseuxSeries`; the
numeric route estimates each ``q_j`` as a limit ``u -> 0+`` of a black box by
Richardson extrapolation on a geometric mesh.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .extrapolation import EPS, LimitEstimate, geometric_mesh, richardson_limit
from .forward import SolutionJet, _expand, _series_from, default_grid, divisor, residual_check
from .puiseux import FunctionHandle, PuiseuxSeries, evaluate
from .series import EXACT, FLOAT, falling


MIN_SAMPLES = 8


class RecoveryError(Exception):
    """Base class for recovery failures."""


class OrderDetectionError(RecoveryError):
    pass


class NoAdmissibleOrder(OrderDetectionError):
    """No vanishing order ``n <= m <= m_max`` explains the samples."""


class NonIntegerOrder(OrderDetectionError):
    """The log-slope settled, but on an exponent ``(m-n)/m`` with non-integer ``m``."""


class NonPositiveLimit(OrderDetectionError):
    """``f`` is negative near 0+ and reflection was not requested."""


class VanishingFunction(OrderDetectionError):
    """``f`` is zero (or not finite) at a sample point."""


class InconsistentSeries(RecoveryError, ValueError):
    """Series header and leading term disagree, or too few terms."""


class DomainExitError(RecoveryError):
    """An integration left the expansion's domain ``u/a >= 0``."""


@dataclass(frozen=True)
class ProbeConfig:
    """Knobs for the numeric route.

    ``u0=None`` means ``1e-2 * delta_max`` of the handle.
    """

    u0: float | None = None
    rho: float = 0.5
    depth: int = 20
    m_max: int = 32
    m_tol: float = 0.05
    limit_tol: float = 1e-6
    slope_tol: float = 1e-6
    levels: int = 8
    reflect: bool = False


@dataclass(frozen=True)
class OrderEstimate:
    m: int
    a: float
    slope: float
    slope_error: float
    limit: float
    limit_error: float
    reflected: bool = False


@dataclass(frozen=True)
class StageDiagnostic:
    stage: int
    limit: float
    error: float
    samples: int


@dataclass(frozen=True)
class RecoveryReport:
    mode: str
    m: int
    a: object
    jet: SolutionJet
    diagnostics: tuple
    reflected: bool = False
    truncated: bool = False
    requested: int = 0
    message: str = ""


def _samples(f: FunctionHandle, cfg: ProbeConfig):
    u0 = cfg.u0 if cfg.u0 is not None else 1e-2 * f.delta_max
    us = geometric_mesh(u0, cfg.rho, cfg.depth)
    fs = np.array([float(f(u)) for u in us])
    if not np.all(np.isfinite(fs)) or np.any(fs == 0):
        raise VanishingFunction("f vanishes or is not finite at a sample point")
    # the sign near 0+ is read at the finest sample; coarse samples of the
    # other sign lie outside the leading term's regime and are dropped
    sign = np.sign(fs[-1])
    other = np.nonzero(np.sign(fs) != sign)[0]
    start = int(other[-1]) + 1 if other.size else 0
    if us.size - start < MIN_SAMPLES:
        raise OrderDetectionError("f changes sign too close to 0 to probe")
    us, fs = us[start:], fs[start:]
    if sign < 0:
        if not cfg.reflect:
            raise NonPositiveLimit("f < 0 near 0+; set reflect to treat the handle as f(-s)")
        return us, -fs, True
    return us, fs, False


def _detect(us, fs, n: int, cfg: ProbeConfig) -> tuple[int, LimitEstimate]:
    slopes = np.log(fs[1:] / fs[:-1]) / math.log(cfg.rho)
    # a log-ratio carries absolute rounding, whatever the slope's size
    noise = np.full(slopes.shape, 8 * EPS / abs(math.log(cfg.rho)))
    best_slope = None
    for m in range(n, cfg.m_max + 1):
        ratios = [cfg.rho ** (k / m) for k in range(1, cfg.levels + 1)]
        est = richardson_limit(slopes, ratios, noise)
        if best_slope is None or est.error < best_slope.error:
            best_slope = est
        if est.value >= 1:
            continue
        m_real = n / (1 - est.value)
        # slope error carried into units of m: dm/dp = m^2/n
        if abs(m_real - m) <= cfg.m_tol and est.error * m * m / n <= cfg.m_tol:
            return m, est
    threshold = 1 - n / (n + cfg.m_max)
    if best_slope.value < threshold and best_slope.error <= cfg.slope_tol:
        m_real = n / (1 - best_slope.value)
        raise NonIntegerOrder(
            f"log-slope settled at {best_slope.value:.12g}, giving m = {m_real:.6g}, not an integer"
        )
    raise NoAdmissibleOrder(
        f"no order n <= m <= {cfg.m_max} fits the log-slope "
        f"(estimate {best_slope.value:.6g} +- {best_slope.error:.2g})"
    )


def detect_order(f: FunctionHandle, n: int, cfg: ProbeConfig = ProbeConfig()) -> OrderEstimate:
    """Read ``m`` and ``a`` off samples of ``f`` near 0.

    The log-slope ``log(f(u_{i+1})/f(u_i)) / log(rho)`` tends to
    ``(m-n)/m``.  Each candidate ``m`` is tried by extrapolating the slope
    with error ratios ``rho**(k/m)``; the candidate is accepted when the
    extrapolated slope maps back to ``m`` within ``m_tol``.  Then ``a``
    follows from ``lim f(u) / u^((m-n)/m) = a^(n/m) m!/(m-n)!``.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    us, fs, reflected = _samples(f, cfg)
    m, slope = _detect(us, fs, n, cfg)
    ratios = [cfg.rho ** (k / m) for k in range(1, cfg.levels + 1)]
    lim = richardson_limit(fs / us ** ((m - n) / m), ratios)
    if lim.value <= 0:
        raise NonPositiveLimit(f"leading limit {lim.value} is not positive")
    a = (lim.value / falling(m, n)) ** (m / n)
    return OrderEstimate(m, -a if reflected else a, slope.value, slope.error, lim.value, lim.error, reflected)


def _partial_q(n: int, m: int, coeffs: list, k: int, field: str):
    """``q_{k+1}`` of the forward series for the jet ``coeffs`` with ``a_{m+k+1} = 0``."""
    jet = SolutionJet(n, m, coeffs, field)
    return _series_from(_expand(jet, k + 1)).coeff(k + 1)


def recover_jet_symbolic(f: PuiseuxSeries, K: int | None = None) -> RecoveryReport:
    """Invert the forward map term by term, exactly in exact mode.

    ``a = q_0 / (m (m-1) ... (m-n+1))`` must equal the header's scale, then
    ``a_{m+k+1} = (q_{k+1} - q'_{k+1}) / D_k`` where ``q'`` comes from the
    partial jet.
    """
    if K is None:
        K = f.trunc_j
    if K > f.trunc_j:
        raise InconsistentSeries(f"asked for {K} coefficients, series only has terms through {f.trunc_j}")
    n, m = f.n, f.m
    q0 = f.coeff(0)
    a = q0 / falling(m, n)
    if f.field == FLOAT and math.isclose(a, f.a, rel_tol=1e-12):
        a = f.a
    if a != f.a:
        raise InconsistentSeries(f"leading term q_0 = {q0} implies a = {a}, header says a = {f.a}")
    coeffs = [a]
    diags = [StageDiagnostic(0, float(q0), 0.0, 0)]
    for k in range(K):
        q = f.coeff(k + 1)
        partial = _partial_q(n, m, coeffs, k, f.field)
        coeffs.append((q - partial) / divisor(n, m, k))
        diags.append(StageDiagnostic(k + 1, float(q), 0.0, 0))
    jet = SolutionJet(n, m, coeffs, f.field)
    return RecoveryReport("symbolic", m, a, jet, tuple(diags), False, False, K)


def recover_jet_numeric(f: FunctionHandle, n: int, K: int, cfg: ProbeConfig = ProbeConfig()) -> RecoveryReport:
    """Recover ``(m, a, a_{m+1}, ..., a_{m+K})`` from a black-box ``f``.

    Stage ``k`` estimates

        q_{k+1} = lim (f(u) - sum_{j<=k} q_j (u/a)^((m-n+j)/m)) / (u/a)^((m-n+k+1)/m)

    with error ratios ``rho**(l/m)``.  A stage whose error estimate exceeds
    ``limit_tol`` stops the recovery; the report then carries the prefix
    recovered so far with ``truncated=True``.
    """
    est = detect_order(f, n, cfg)
    m = est.m
    us, fs, reflected = _samples(f, cfg)
    a = abs(est.a)
    ratios = [cfg.rho ** (k / m) for k in range(1, cfg.levels + 1)]
    diags = [StageDiagnostic(0, est.limit, est.limit_error, len(us))]
    coeffs = [a]
    qs = [a * falling(m, n)]
    ys = (us / a) ** (1.0 / m)
    truncated = False
    message = ""
    for k in range(K):
        partial_sum = np.zeros_like(us)
        magnitude = np.abs(fs)
        for j, q in enumerate(qs):
            term = q * ys ** (m - n + j)
            partial_sum += term
            magnitude += np.abs(term)
        scale = ys ** (m - n + k + 1)
        g = (fs - partial_sum) / scale
        lim = richardson_limit(g, ratios, 4 * EPS * magnitude / scale)
        if not lim.error <= cfg.limit_tol:
            truncated = True
            message = f"stage {k + 1}: extrapolation error {lim.error:.3g} > {cfg.limit_tol:.3g}"
            break
        q_next = lim.value
        partial = _partial_q(n, m, coeffs, k, FLOAT)
        coeffs.append((q_next - partial) / divisor(n, m, k))
        qs.append(q_next)
        diags.append(StageDiagnostic(k + 1, lim.value, lim.error, len(us)))
    if reflected:
        coeffs = [-c for c in coeffs]
    jet = SolutionJet(n, m, coeffs, FLOAT)
    return RecoveryReport("numeric", m, coeffs[0], jet, tuple(diags), reflected, truncated, K, message)


@dataclass(frozen=True)
class Verdict:
    residuals: tuple
    disagreements: tuple
    endpoint_errors: tuple
    passed: bool
    notes: tuple = ()


def _jets_agree(u: SolutionJet, v: SolutionJet, tol: float) -> bool:
    if (u.n, u.m) != (v.n, v.m):
        return False
    top = max(len(u.coeffs), len(v.coeffs))
    if u.field == v.field == EXACT:
        return u.padded(top) == v.padded(top)
    return all(abs(float(x) - float(y)) <= tol for x, y in zip(u.padded(top), v.padded(top)))


def rk4_integrate(f: PuiseuxSeries, state0: Sequence[float], t0: float, t1: float, steps: int) -> np.ndarray:
    """Classical RK4 for ``u^(n) = f(u)`` written as a first-order system."""
    n = f.n
    y = np.array(state0, dtype=float)
    if len(y) != n:
        raise ValueError(f"state must have {n} components")
    a = float(f.a)

    def rhs(state):
        if state[0] / a < 0:
            raise DomainExitError(f"u left the domain u/a >= 0 (u = {state[0]:.3g})")
        out = np.empty_like(state)
        out[:-1] = state[1:]
        out[-1] = evaluate(f, float(state[0]))
        return out

    h = (t1 - t0) / steps
    for _ in range(steps):
        k1 = rhs(y)
        k2 = rhs(y + 0.5 * h * k1)
        k3 = rhs(y + 0.5 * h * k2)
        k4 = rhs(y + h * k3)
        y = y + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
    return y


def crosscheck_uniqueness(f: PuiseuxSeries, jets: Sequence[SolutionJet], t0: float, t1: float,
                          steps: int = 10_000, rtol: float = 1e-6, grid: Sequence[float] | None = None,
                          eps_slope: float = 0.3, agree_tol: float = 1e-9) -> Verdict:
    """Check that jets claiming to solve ``u^(n) = f(u)`` are one and the same.

    Every jet gets a residual check against ``f``; any two jets that differ
    are listed as a disagreement.  Each jet is also continued numerically
    from ``t0`` to ``t1`` with RK4 and compared with its own polynomial value.
    """
    if not 0 < t0 <= t1 < 1:
        raise ValueError("need 0 < t0 <= t1 < 1")
    grid = default_grid() if grid is None else grid
    residuals = tuple(residual_check(j, f, grid, eps_slope) for j in jets)
    disagreements = []
    for i in range(len(jets)):
        for j in range(i + 1, len(jets)):
            if not _jets_agree(jets[i], jets[j], agree_tol):
                disagreements.append((i, j))
    notes = []
    endpoint = []
    if t0 == t1:
        notes.append("t0 == t1: no continuation performed")
        endpoint = [0.0] * len(jets)
    else:
        for jet in jets:
            state = [jet.derivative(t0, k) for k in range(f.n)]
            y = rk4_integrate(f, state, t0, t1, steps)
            exact = jet.derivative(t1, 0)
            endpoint.append(abs(y[0] - exact) / abs(exact))
    passed = (all(r.passed for r in residuals) and not disagreements
              and all(e <= rtol for e in endpoint))
    return Verdict(residuals, tuple(disagreements), tuple(endpoint), passed, tuple(notes))
