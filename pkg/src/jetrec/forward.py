"""From a solution's jet to the Puiseux expansion of its right-hand side.

Given ``u(t) = a t^m + a_{m+1} t^{m+1} + ...`` the map runs

1. ``x(t) = (u/a)^(1/m)``      (:func:`~jetrec.series.mth_root_normalized`)
2. ``t(x)``                    (:func:`~jetrec.series.revert`)
3. ``u^(n)(t(x))``             (:func:`~jetrec.series.compose`)

and reads the coefficient of ``x^(m-n+j)`` as the coefficient of
``(u/a)^((m-n+j)/m)`` in ``f``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import mpmath
import numpy as np

from .puiseux import PuiseuxSeries
from .series import (
    Coefficient,
    TaylorPoly,
    coerce,
    compose,
    convert,
    falling,
    infer_field,
    jet_nth_derivative,
    mth_root_normalized,
    power,
    revert,
)


class NonPositiveLeadingError(ValueError):
    """The jet has ``a < 0`` and reflection was not requested."""


@dataclass(frozen=True)
class SolutionJet:
    """Taylor data ``a_m = a, a_{m+1}, ...`` of ``u`` at 0 for ``u^(n) = f(u)``.

    The coefficients are Taylor coefficients (``u = sum a_k t^k``), not
    derivative values.  Coefficients past the stored ones are zero, so a jet
    is also a polynomial solution candidate; trailing zeros are dropped to
    keep equality canonical.
    """

    n: int
    m: int
    coeffs: tuple
    field: str

    def __init__(self, n: int, m: int, coeffs: Sequence, field: str | None = None):
        if n < 1:
            raise ValueError(f"equation order n must be >= 1, got {n}")
        if m < n:
            raise ValueError(f"vanishing order must satisfy m >= n (got m={m}, n={n})")
        cs = list(coeffs)
        if not cs or cs[0] == 0:
            raise ValueError("leading coefficient a = u^(m)(0)/m! must be nonzero")
        if field is None:
            field = infer_field(cs)
        cs = [coerce(c, field) for c in cs]
        while cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "coeffs", tuple(cs))
        object.__setattr__(self, "field", field)

    @property
    def a(self) -> Coefficient:
        return self.coeffs[0]

    @property
    def degree(self) -> int:
        return self.m + len(self.coeffs) - 1

    def coeff(self, k: int) -> Coefficient:
        """``a_{m+k}``; zero past the stored coefficients."""
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return coerce(0, self.field)

    def padded(self, count: int) -> list:
        return [self.coeff(k) for k in range(count)]

    def negated(self) -> "SolutionJet":
        return SolutionJet(self.n, self.m, [-c for c in self.coeffs], self.field)

    def to_field(self, field: str) -> "SolutionJet":
        return SolutionJet(self.n, self.m, [convert(c, field) for c in self.coeffs], field)

    def taylor(self, trunc: int) -> TaylorPoly:
        """``u(t)`` as a series through ``t**trunc``."""
        cs = [0] * self.m + list(self.coeffs)
        cs = cs[: trunc + 1]
        return TaylorPoly(cs, trunc, self.field)

    def derivative(self, t, order: int = 0):
        """Float value of ``u^(order)(t)`` for the polynomial solution."""
        acc = 0.0
        for k, c in enumerate(self.coeffs):
            e = self.m + k
            if e >= order:
                acc = acc + float(c) * falling(e, order) * t ** (e - order)
        return acc


@dataclass(frozen=True)
class CompositionLedger:
    """Intermediate constants of the forward map, keyed by their natural indices.

    ``lam[j]``    coefficient of ``t^j`` in ``x(t)``, ``j = 2..J+1``
    ``b[j]``      coefficient of ``x^j`` in ``t(x)``, ``j = 2..J+1``
    ``Q[k]``      ``b[k+2] + a_{m+k+1}/(m a)``, ``k = 0..J-1``
    ``c[i, e]``   coefficient of ``x^(e+i)`` in ``t^e``, ``e = m-n+r``
    ``p[e]``      coefficient of ``x^e`` in ``u^(n)``, ``e = m-n..m-n+J``
    """

    lam: dict
    b: dict
    Q: dict
    c: dict
    p: dict


@dataclass(frozen=True)
class _Expansion:
    jet: SolutionJet
    J: int
    x_of_t: TaylorPoly
    t_of_x: TaylorPoly
    un_of_x: TaylorPoly


def _expand(jet: SolutionJet, J: int) -> _Expansion:
    if J < 0:
        raise ValueError("number of terms J must be >= 0")
    n, m = jet.n, jet.m
    top = m - n + J
    u = jet.taylor(m + top)
    # c / a rather than c * (1/a): a / a is exactly 1 in both fields
    ua = TaylorPoly([c / jet.a for c in u.coeffs], u.trunc, jet.field)
    x = mth_root_normalized(ua, m)
    t = revert(x)
    un = compose(jet_nth_derivative(jet, top), t)
    return _Expansion(jet, J, x, t, un)


def _series_from(exp: _Expansion) -> PuiseuxSeries:
    jet = exp.jet
    base = jet.m - jet.n
    qs = [exp.un_of_x.coeffs[base + j] for j in range(exp.J + 1)]
    return PuiseuxSeries.from_coeffs(jet.n, jet.m, jet.a, qs, jet.field)


def _check_sign(jet: SolutionJet, reflect: bool) -> SolutionJet:
    if jet.a > 0:
        return jet
    if not reflect:
        raise NonPositiveLeadingError(
            "a < 0: pass reflect=True to expand the reflected solution -u"
        )
    return jet.negated()


def forward_map(jet: SolutionJet, J: int, reflect: bool = False) -> PuiseuxSeries:
    """Puiseux expansion of ``f`` with ``u^(n) = f(u)`` through term ``J``.

    The returned series satisfies ``f(u(t)) = u^(n)(t) + O(t^(m-n+J+1))``.
    With ``a < 0`` the jet is rejected unless ``reflect`` is set, in which
    case the expansion of ``g(s) = -f(-s)`` for ``-u`` is returned.
    """
    return _series_from(_expand(_check_sign(jet, reflect), J))


def ledger(jet: SolutionJet, J: int, reflect: bool = False) -> CompositionLedger:
    jet = _check_sign(jet, reflect)
    exp = _expand(jet, J)
    n, m = jet.n, jet.m
    base = m - n
    ma = m * jet.a
    lam = {j: exp.x_of_t.coeffs[j] for j in range(2, J + 2)}
    b = {j: exp.t_of_x.coeffs[j] for j in range(2, J + 2)}
    Q = {k: b[k + 2] + jet.coeff(k + 1) / ma for k in range(J)}
    c = {}
    for r in range(J + 1):
        e = base + r
        if J - r < 1:
            continue
        te = power(exp.t_of_x, e) if e > 0 else TaylorPoly.one(exp.t_of_x.trunc, jet.field)
        for i in range(1, J - r + 1):
            c[i, e] = te.coeffs[e + i]
    p = {base + r: exp.un_of_x.coeffs[base + r] for r in range(J + 1)}
    return CompositionLedger(lam, b, Q, c, p)


def divisor(n: int, m: int, k: int) -> int:
    """Coefficient of ``a_{m+k+1}`` in the term ``q_{k+1}``.

    ``(m+k+1)(m+k)...(m+k-n+2) - (m-1)(m-2)...(m-n)``
    """
    return falling(m + k + 1, n) - falling(m - 1, n)


@dataclass(frozen=True)
class ResidualReport:
    t_grid: tuple
    residuals: tuple
    slope: float
    expected_order: int
    eps_slope: float
    exact_points: int
    passed: bool


def _mpf(ctx, c):
    if isinstance(c, Fraction):
        return ctx.mpf(c.numerator) / c.denominator
    return ctx.mpf(c)


def _mp_series(ctx, ps: PuiseuxSeries, u):
    r = u / _mpf(ctx, ps.a)
    if r < 0:
        raise ValueError("u/a < 0 is outside the expansion's domain")
    y = ctx.root(r, ps.m) if r > 0 else ctx.mpf(0)
    acc = ctx.mpf(0)
    for j in range(ps.trunc_j, -1, -1):
        acc = acc * y + _mpf(ctx, ps.coeff(j))
    return acc * y ** (ps.m - ps.n)


def _mp_jet(ctx, jet: SolutionJet, t, order: int):
    acc = ctx.mpf(0)
    for k, c in enumerate(jet.coeffs):
        e = jet.m + k
        if e >= order:
            acc += _mpf(ctx, c) * falling(e, order) * t ** (e - order)
    return acc


def residual_check(jet: SolutionJet, ps: PuiseuxSeries, t_grid: Sequence[float],
                   eps_slope: float = 0.3, dps: int = 60) -> ResidualReport:
    """Check ``|u^(n)(t) - f_J(u(t))| = O(t^(m-n+J+1))`` on a grid.

    Evaluated in ``dps``-digit arithmetic so float rounding does not mask the
    residual's order.  Points whose residual sits at the working-precision
    floor count as exact and are left out of the log-log fit; if every point
    is exact the slope is reported as ``inf``.
    """
    ts = [float(t) for t in t_grid]
    if not ts:
        raise ValueError("empty t grid")
    if any(not 0 < t < 1 for t in ts):
        raise ValueError("t grid must lie in (0, 1)")
    ctx = mpmath.MPContext()
    ctx.dps = dps
    floor = ctx.mpf(10) ** (-(dps - 10))
    residuals, logs_t, logs_r = [], [], []
    exact = 0
    for t in ts:
        tm = ctx.mpf(t)
        lhs = _mp_jet(ctx, jet, tm, jet.n)
        rhs = _mp_series(ctx, ps, _mp_jet(ctx, jet, tm, 0))
        r = abs(lhs - rhs)
        scale = 1 + abs(lhs)
        if r <= floor * scale:
            exact += 1
            residuals.append(0.0)
            continue
        residuals.append(float(r))
        logs_t.append(math.log(t))
        logs_r.append(float(ctx.log(r)))
    expected = jet.m - jet.n + ps.trunc_j + 1
    if len(logs_t) >= 2:
        slope = float(np.polyfit(logs_t, logs_r, 1)[0])
    elif logs_t:
        slope = float("nan")
    else:
        slope = math.inf
    if math.isnan(slope):
        passed = False
    else:
        passed = slope >= expected - eps_slope
    return ResidualReport(tuple(ts), tuple(residuals), slope, expected, eps_slope, exact, passed)


def default_grid(points: int = 7, t0: float = 0.1) -> list:
    """``t0 * 2**-i`` for ``i = 0..points-1``."""
    return [t0 * 2.0 ** -i for i in range(points)]
