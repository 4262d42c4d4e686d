"""Finite fractional-power expansions of a right-hand side ``f(u)``.

A :class:`PuiseuxSeries` with header ``(n, m, a)`` stands for

    f(u) = sum_j q_j (u/a)^((m - n + j)/m) + O((u/a)^((m - n + J + 1)/m))

Coefficients are kept relative to ``u/a`` so that exact arithmetic survives
even when ``a**(1/m)`` is irrational; the scale only enters at float
evaluation time.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Mapping

import numpy as np

from .series import EXACT, FLOAT, Coefficient, coerce, infer_field


@dataclass(frozen=True)
class FunctionHandle:
    """Black-box view of ``f`` on ``[0, delta_max]``.

    ``func`` must be deterministic.  Handles built by :func:`to_callable`
    accept numpy arrays as well as scalars.
    """

    func: Callable
    delta_max: float = 1.0
    name: str = "f"

    def __call__(self, u):
        return self.func(u)


@dataclass(frozen=True)
class PuiseuxSeries:
    n: int
    m: int
    a: Coefficient
    terms: tuple
    trunc_j: int
    field: str

    def __init__(self, n: int, m: int, a, terms: Mapping | Iterable = (), trunc_j: int | None = None,
                 field: str | None = None):
        pairs = list(terms.items()) if isinstance(terms, Mapping) else [tuple(p) for p in terms]
        if not 1 <= n <= m:
            raise ValueError(f"need 1 <= n <= m, got n={n}, m={m}")
        if field is None:
            field = infer_field([a] + [q for _, q in pairs])
        a = coerce(a, field)
        if a == 0:
            raise ValueError("scale a must be nonzero")
        js = [j for j, _ in pairs]
        if len(set(js)) != len(js):
            raise ValueError("duplicate term index")
        if any(j < 0 for j in js):
            raise ValueError("term indices must be >= 0")
        if trunc_j is None:
            trunc_j = max(js, default=0)
        if any(j > trunc_j for j in js):
            raise ValueError(f"term index beyond truncation {trunc_j}")
        kept = tuple(sorted((j, coerce(q, field)) for j, q in pairs if q != 0))
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "terms", kept)
        object.__setattr__(self, "trunc_j", trunc_j)
        object.__setattr__(self, "field", field)

    @classmethod
    def from_coeffs(cls, n: int, m: int, a, coeffs, field: str | None = None) -> "PuiseuxSeries":
        """Dense constructor: ``coeffs[j]`` is ``q_j`` for ``j = 0..J``."""
        return cls(n, m, a, list(enumerate(coeffs)), len(coeffs) - 1, field)

    def coeff(self, j: int) -> Coefficient:
        for jj, q in self.terms:
            if jj == j:
                return q
        return coerce(0, self.field)

    def dense(self) -> list:
        """``[q_0, ..., q_J]`` with explicit zeros."""
        return [self.coeff(j) for j in range(self.trunc_j + 1)]

    def exponent(self, j: int) -> Fraction:
        return Fraction(self.m - self.n + j, self.m)

    def scaled(self, c) -> "PuiseuxSeries":
        c = coerce(c, self.field)
        return PuiseuxSeries(self.n, self.m, self.a, [(j, c * q) for j, q in self.terms], self.trunc_j, self.field)

    def __call__(self, u):
        return evaluate(self, u)

    def __str__(self) -> str:
        parts = [f"{q}*(u/{self.a})^({self.exponent(j)})" for j, q in self.terms]
        body = " + ".join(parts) if parts else "0"
        return f"{body} + O((u/{self.a})^({self.exponent(self.trunc_j + 1)}))"


def leading_exponent(ps: PuiseuxSeries) -> Fraction:
    """Exponent ``(m - n + j0)/m`` of the first nonzero term."""
    if not ps.terms:
        raise ValueError("all-zero series has no leading exponent")
    return ps.exponent(ps.terms[0][0])


def evaluate(ps: PuiseuxSeries, u):
    """Float value of the stored terms at ``u`` (scalar or numpy array).

    Computes ``y = (u/a)**(1/m)`` and then Horner in ``y``.  At ``u = 0`` this
    gives ``q_0`` when ``m == n`` and 0 otherwise.
    """
    scalar = np.isscalar(u)
    r = np.asarray(u, dtype=float) / float(ps.a)
    if np.any(r < 0):
        raise ValueError("u/a < 0 is outside the expansion's domain")
    y = r ** (1.0 / ps.m)
    acc = np.zeros_like(y)
    for j in range(ps.trunc_j, -1, -1):
        acc = acc * y + float(ps.coeff(j))
    out = acc * y ** (ps.m - ps.n)
    return float(out) if scalar else out


@dataclass(frozen=True)
class DiffReport:
    structural_match: bool
    deltas: tuple = ()
    max_delta: float = 0.0
    passed: bool = False
    exact: bool = False
    message: str = ""


def compare(ps1: PuiseuxSeries, ps2: PuiseuxSeries, tol: float = 1e-9) -> DiffReport:
    """Per-term differences through ``min(J1, J2)``.

    When both series are exact, equality is required and ``tol`` is ignored.
    Differing ``(n, m)`` or scale ``a`` is reported as a structural mismatch.
    """
    if (ps1.n, ps1.m) != (ps2.n, ps2.m):
        return DiffReport(False, message=f"(n, m) differ: {(ps1.n, ps1.m)} vs {(ps2.n, ps2.m)}")
    if ps1.a != ps2.a:
        return DiffReport(False, message=f"scales differ: a={ps1.a} vs a={ps2.a}")
    exact = ps1.field == ps2.field == EXACT
    top = min(ps1.trunc_j, ps2.trunc_j)
    if exact:
        deltas = tuple((j, ps1.coeff(j) - ps2.coeff(j)) for j in range(top + 1))
        worst = max((abs(d) for _, d in deltas), default=Fraction(0))
        return DiffReport(True, deltas, float(worst), worst == 0, True)
    deltas = tuple((j, float(ps1.coeff(j)) - float(ps2.coeff(j))) for j in range(top + 1))
    worst = max((abs(d) for _, d in deltas), default=0.0)
    return DiffReport(True, deltas, worst, worst <= tol, False)


def to_callable(ps: PuiseuxSeries, delta_max: float = 1.0) -> FunctionHandle:
    return FunctionHandle(lambda u: evaluate(ps, u), delta_max, name=f"puiseux(n={ps.n}, m={ps.m})")


__all__ = [
    "EXACT",
    "FLOAT",
    "DiffReport",
    "FunctionHandle",
    "PuiseuxSeries",
    "compare",
    "evaluate",
    "leading_exponent",
    "to_callable",
]
