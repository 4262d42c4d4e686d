"""Numeric checks of the regularity claims around ``u^(n) = f(u)``.

* Hölder quotients of ``f`` near 0 (:func:`holder_estimate`)
* the ratio ``|g^(n)| / sum_k |g^(k)| / x^(n-k)`` that separates flat from
  finite-order functions (:func:`flatness_inequality_check`)
* the two estimates used to compare solutions with the same leading term
  (:func:`gap_bound_check`)
* regularity of the Taylor remainder quotient (:func:`taylor_remainder_check`)

Anything that can underflow binary64 (``exp(-1/t)`` at ``t = 1e-6``) is
evaluated with mpmath in a private context.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

import mpmath
import numpy as np

from .forward import SolutionJet
from .puiseux import FunctionHandle
from .series import falling

DPS = 50


def _ctx(dps: int = DPS):
    ctx = mpmath.MPContext()
    ctx.dps = dps
    return ctx


def _mpf(ctx, c):
    if isinstance(c, Fraction):
        return ctx.mpf(c.numerator) / c.denominator
    return ctx.mpf(c)


@dataclass(frozen=True)
class DerivativeBundle:
    """``g`` together with its derivatives.

    ``derivs(ctx, x, order)`` returns ``[g(x), g'(x), ..., g^(order)(x)]`` as
    mpmath numbers of ``ctx``.
    """

    name: str
    derivs: Callable

    def values(self, x, order: int, ctx=None) -> list:
        ctx = ctx or _ctx()
        return self.derivs(ctx, ctx.mpf(x), order)


def polynomial_bundle(coeffs: Sequence, name: str = "poly") -> DerivativeBundle:
    """``g(x) = sum coeffs[k] x^k``."""
    cs = list(coeffs)

    def derivs(ctx, x, order):
        out = []
        for d in range(order + 1):
            acc = ctx.mpf(0)
            for k in range(len(cs) - 1, d - 1, -1):
                acc = acc * x + _mpf(ctx, cs[k]) * falling(k, d)
            out.append(acc)
        return out

    return DerivativeBundle(name, derivs)


def jet_bundle(jet: SolutionJet) -> DerivativeBundle:
    """The polynomial solution ``u(t)`` carried by a jet."""
    return polynomial_bundle([0] * jet.m + list(jet.coeffs), name=f"jet(m={jet.m})")


def jet_difference_bundle(u: SolutionJet, v: SolutionJet) -> DerivativeBundle:
    """``w = u - v``, built from coefficient differences so no cancellation occurs."""
    top = max(len(u.coeffs), len(v.coeffs))
    if u.m != v.m:
        raise ValueError("jets must share the vanishing order m")
    diff = [0] * u.m + [x - y for x, y in zip(u.padded(top), v.padded(top))]
    return polynomial_bundle(diff, name="jet difference")


def exp_bundle() -> DerivativeBundle:
    return DerivativeBundle("exp", lambda ctx, x, order: [ctx.exp(x)] * (order + 1))


def sin_bundle() -> DerivativeBundle:
    def derivs(ctx, x, order):
        s, c = ctx.sin(x), ctx.cos(x)
        return [(s, c, -s, -c)[d % 4] for d in range(order + 1)]

    return DerivativeBundle("sin", derivs)


def expflat_bundle() -> DerivativeBundle:
    """``g(t) = exp(-1/t)`` for ``t > 0`` (and 0 at 0), flat at the origin.

    ``g^(k)(t) = P_k(1/t) exp(-1/t)`` with ``P_0 = 1`` and
    ``P_{k+1}(s) = s^2 (P_k(s) - P_k'(s))``.
    """

    def derivs(ctx, t, order):
        if t <= 0:
            return [ctx.mpf(0)] * (order + 1)
        s = 1 / t
        e = ctx.exp(-s)
        p = [1]  # coefficients of P_k in s
        out = []
        for _ in range(order + 1):
            acc = ctx.mpf(0)
            for c in reversed(p):
                acc = acc * s + c
            out.append(acc * e)
            dp = [i * p[i] for i in range(1, len(p))] + [0]
            p = [0, 0] + [x - y for x, y in zip(p, dp)]
        return out

    return DerivativeBundle("expflat", derivs)


# -- Hölder quotients ---------------------------------------------------------

@dataclass(frozen=True)
class HolderEstimate:
    alpha: Fraction
    delta: float
    pairs: int
    max_quotient: float
    argmax: tuple
    constant: float


def holder_pairs(delta: float, samples: int, seed: int) -> tuple[np.ndarray, np.ndarray]:
    """Deterministic sample pairs in ``[0, delta]^2`` with ``u1 != u2``.

    Half are uniform.  The other half are anchored at ``0`` and at
    ``delta * 4**-i``, where the supremum of a power law sits, and reach out
    by log-uniform offsets down to ``delta / samples**2``.  Every anchor also
    gets the endpoint pair ``(0, anchor)``.
    """
    if samples < 2:
        raise ValueError("need at least 2 samples")
    if delta <= 0:
        raise ValueError("delta must be positive")
    rng = np.random.default_rng(seed)
    half = samples // 2
    u1 = rng.uniform(0, delta, half)
    u2 = rng.uniform(0, delta, half)
    levels = max(1, int(math.log(samples ** 2) / math.log(4)))
    anchors = np.concatenate([[0.0], delta * 4.0 ** -np.arange(levels)])
    rest = samples - half
    base = anchors[rng.integers(0, anchors.size, rest)]
    lo = math.log(delta / samples ** 2)
    offsets = np.exp(rng.uniform(lo, math.log(delta), rest))
    v1 = np.where(base + offsets <= delta, base + offsets, base - offsets)
    v1 = np.clip(v1, 0, delta)
    ends = anchors[1:]
    u1 = np.concatenate([u1, v1, ends])
    u2 = np.concatenate([u2, base, np.zeros_like(ends)])
    keep = u1 != u2
    return u1[keep], u2[keep]


def holder_quotients(f: FunctionHandle, alpha, u1: np.ndarray, u2: np.ndarray) -> np.ndarray:
    """``|f(u1) - f(u2)| / |u1 - u2|**alpha`` elementwise."""
    f1 = np.asarray(f(u1), dtype=float)
    f2 = np.asarray(f(u2), dtype=float)
    if not (np.all(np.isfinite(f1)) and np.all(np.isfinite(f2))):
        raise ValueError(f"{getattr(f, 'name', 'f')} is not finite on [0, delta]")
    return np.abs(f1 - f2) / np.abs(u1 - u2) ** float(alpha)


def holder_estimate(f: FunctionHandle, alpha, delta: float, samples: int, seed: int) -> HolderEstimate:
    """Largest sampled Hölder quotient of ``f`` on ``[0, delta]``.

    A bounded maximum that stops growing as ``samples`` increases is evidence
    of Hölder continuity at ``alpha``; a maximum that keeps growing is the
    expected outcome when ``alpha`` is too large.
    """
    alpha = Fraction(alpha)
    if not 0 < alpha <= 1:
        raise ValueError("alpha must lie in (0, 1]")
    u1, u2 = holder_pairs(delta, samples, seed)
    q = holder_quotients(f, alpha, u1, u2)
    i = int(np.argmax(q))
    return HolderEstimate(alpha, float(delta), int(q.size), float(q[i]),
                          (float(u1[i]), float(u2[i])), float(q[i]))


def holder_exponent_for_jet(jet: SolutionJet) -> Fraction:
    """Exponent at which ``f`` is guaranteed Hölder near 0: ``1/m``.

    The leading term ``(u/a)^((m-n)/m)`` has exponent ``(m-n)/m >= 1/m``
    when ``m > n``, and the rest is ``(u/a)^((m-n)/m)`` times a ``C^1``
    function of ``(u/a)^(1/m)``, which is Hölder with exponent ``1/m``.
    """
    return Fraction(1, jet.m)


def default_delta(jet: SolutionJet) -> float:
    """``u(t*)`` capped at 1, for ``t*`` the largest power of 1/2 where the
    leading term beats twice the rest of the jet."""
    a = abs(float(jet.a))
    t = 1.0
    for _ in range(60):
        rest = sum(abs(float(c)) * t ** (jet.m + k) for k, c in enumerate(jet.coeffs) if k > 0)
        if a * t ** jet.m >= 2 * rest:
            break
        t /= 2
    return min(1.0, a * t ** jet.m)


# -- flatness ratio -----------------------------------------------------------

@dataclass(frozen=True)
class FlatnessCheck:
    n: int
    grid: tuple
    ratios: tuple
    sup_ratio: float
    bounded: bool
    c_max: float
    zero_over_zero: int
    infinite: int


def flatness_inequality_check(g: DerivativeBundle, n: int, grid: Sequence[float],
                              c_max: float = 1e3) -> FlatnessCheck:
    """Profile of ``|g^(n)(x)| / sum_{k<n} |g^(k)(x)| / x^(n-k)`` over a grid.

    A finite-order function keeps this ratio bounded near 0; a flat one need
    not (``exp(-1/t)`` gives ``1/t`` for ``n = 1``).  ``0/0`` is recorded as
    0 and counted; a zero denominator under a nonzero numerator is ``inf``.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    xs = [float(x) for x in grid]
    if not xs or any(not 0 < x <= 1 for x in xs):
        raise ValueError("grid must be a nonempty subset of (0, 1]")
    ctx = _ctx()
    ratios = []
    zz = inf = 0
    for x in xs:
        xm = ctx.mpf(x)
        d = g.derivs(ctx, xm, n)
        num = abs(d[n])
        den = ctx.fsum(abs(d[k]) / xm ** (n - k) for k in range(n))
        if den == 0:
            if num == 0:
                zz += 1
                ratios.append(0.0)
            else:
                inf += 1
                ratios.append(math.inf)
            continue
        ratios.append(float(num / den))
    sup = max(ratios)
    return FlatnessCheck(n, tuple(xs), tuple(ratios), sup, sup <= c_max, c_max, zz, inf)


# -- comparing two solutions ---------------------------------------------------

class GapDomainError(ValueError):
    """A solution is not positive on the grid."""


@dataclass(frozen=True)
class GapProbe:
    u: SolutionJet
    v: SolutionJet
    grid: tuple
    w: tuple
    zeta: tuple
    eta: tuple
    power_gap: tuple
    power_bound: tuple
    power_ok: bool
    ratios: tuple
    constant: float
    refined_constant: float
    stable: bool
    leading_differs: bool


def _refine(grid: Sequence[float]) -> list:
    ts = sorted(set(grid))
    extra = [t * 2 ** -0.5 for t in ts] + [ts[0] / 2, ts[0] / 4]
    return sorted(set(ts) | set(extra))


def gap_bound_check(u: SolutionJet, v: SolutionJet, grid: Sequence[float], stability: float = 0.05) -> GapProbe:
    """Check the two estimates behind uniqueness for a pair of jets.

    (i)  ``|u^p - v^p| <= p * zeta^(p-1) * |u - v|`` with ``p = (m-n)/m`` and
         ``zeta = min(u, v)`` (valid since ``s^p`` is concave);
    (ii) ``|w^(n)(t)| <= C |w(t)| / t^n`` for ``w = u - v``; the smallest
         such ``C`` on the grid is reported, together with the same quantity
         on a refined grid.  ``stable`` means refinement moved it by at most
         the relative ``stability``.
    """
    if (u.n, u.m) != (v.n, v.m):
        raise ValueError("jets must share n and m")
    ts = [float(t) for t in grid]
    if not ts or any(not 0 < t < 1 for t in ts):
        raise ValueError("grid must be a nonempty subset of (0, 1)")
    n, m = u.n, u.m
    ctx = _ctx()
    ub, vb, wb = jet_bundle(u), jet_bundle(v), jet_difference_bundle(u, v)
    p = ctx.mpf(m - n) / m

    def ratio_at(t):
        tm = ctx.mpf(t)
        wd = wb.derivs(ctx, tm, n)
        if wd[0] == 0:
            return 0.0 if wd[n] == 0 else math.inf
        return float(abs(wd[n]) * tm ** n / abs(wd[0]))

    ws, zs, es, gaps, bounds = [], [], [], [], []
    ok = True
    for t in ts:
        tm = ctx.mpf(t)
        uu = ub.derivs(ctx, tm, 0)[0]
        vv = vb.derivs(ctx, tm, 0)[0]
        if uu <= 0 or vv <= 0:
            raise GapDomainError(f"u(t) and v(t) must be positive on the grid (t = {t})")
        w = wb.derivs(ctx, tm, 0)[0]
        zeta, eta = min(uu, vv), max(uu, vv)
        gap = abs(uu ** p - vv ** p)
        bound = p * zeta ** (p - 1) * abs(w)
        # slack for rounding in the subtraction u^p - v^p
        ok = ok and gap <= bound * (1 + ctx.mpf(10) ** (-(DPS - 10))) + ctx.mpf(10) ** (-(DPS - 10)) * uu ** p
        ws.append(float(w))
        zs.append(float(zeta))
        es.append(float(eta))
        gaps.append(float(gap))
        bounds.append(float(bound))
    ratios = [ratio_at(t) for t in ts]
    c = max(ratios)
    c_ref = max(ratio_at(t) for t in _refine(ts))
    if c == c_ref:
        stable = True
    else:
        stable = math.isfinite(c_ref) and abs(c_ref - c) <= stability * abs(c_ref)
    return GapProbe(u, v, tuple(ts), tuple(ws), tuple(zs), tuple(es), tuple(gaps), tuple(bounds),
                    bool(ok), tuple(ratios), c, c_ref, stable, u.a != v.a)


# -- Taylor remainder ---------------------------------------------------------

@dataclass(frozen=True)
class RemainderReport:
    a: float
    k: int
    grid: tuple
    h: tuple
    expected: float
    slope_at_a: float
    slope_limit: float
    constant: float
    tol: float
    passed: bool


def taylor_remainder_check(g: DerivativeBundle, a: float, k: int, grid: Sequence[float],
                           tol: float = 1e-6) -> RemainderReport:
    """Regularity of ``h(x) = (g(x) - P_k(x)) / (x - a)^k`` at ``x = a``.

    ``P_k`` is the degree-``k`` Taylor polynomial at ``a``.  The expected
    slope is ``h'(a) = g^(k+1)(a) / (k+1)!``.  It is estimated twice: by the
    difference quotient ``h(x) / (x - a)`` at the grid point closest to
    ``a``, and by ``h'(x)`` there (the limit of ``h'`` as ``x -> a``).  Also
    reported is the smallest ``C`` with ``|h(x)| <= C |x - a|`` on the grid.
    """
    if k < 0:
        raise ValueError("k must be >= 0")
    xs = sorted(float(x) for x in grid)
    if len(xs) < 2 or xs[0] <= a:
        raise ValueError("grid must have at least two points, all above a")
    ctx = _ctx()
    am = ctx.mpf(a)
    at_a = g.derivs(ctx, am, k + 1)
    expected = at_a[k + 1] / ctx.factorial(k + 1)

    def taylor(x, shift):
        # shift-th derivative of P_k at x
        d = x - am
        return ctx.fsum(at_a[j] * d ** (j - shift) / ctx.factorial(j - shift) for j in range(shift, k + 1))

    hs, consts = [], []
    for x in xs:
        xm = ctx.mpf(x)
        gx = g.derivs(ctx, xm, 0)[0]
        h = (gx - taylor(xm, 0)) / (xm - am) ** k
        hs.append(h)
        consts.append(abs(h) / (xm - am))
    x0 = ctx.mpf(xs[0])
    d0 = x0 - am
    slope_at_a = hs[0] / d0
    g0, g1 = g.derivs(ctx, x0, 1)
    r0 = g0 - taylor(x0, 0)
    r1 = g1 - taylor(x0, 1)
    slope_limit = r1 / d0 ** k - k * r0 / d0 ** (k + 1)
    passed = (abs(slope_at_a - expected) <= tol and abs(slope_limit - expected) <= tol
              and abs(hs[0]) <= abs(hs[-1]) + tol)
    return RemainderReport(float(a), k, tuple(xs), tuple(float(h) for h in hs), float(expected),
                           float(slope_at_a), float(slope_limit), float(max(consts)), tol, bool(passed))
