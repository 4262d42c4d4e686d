"""Truncated power series in one variable.

A :class:`TaylorPoly` stores ``c_0 + c_1 t + ... + c_K t^K + O(t^{K+1})``.
Coefficients live in one of two fields: exact rationals
(:class:`fractions.Fraction`) or binary64 floats.  Every operation reports the
truncation order that provably survives, computed from valuations, and never
pads unknown coefficients with zeros.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

Coefficient = Union[Fraction, float]

EXACT = "exact"
FLOAT = "float"


class FieldMismatchError(TypeError):
    """Raised when exact and float coefficients meet in one operation."""


def field_of(value) -> str:
    """Return the field tag of a single coefficient value."""
    if isinstance(value, bool):
        raise TypeError("booleans are not coefficients")
    if isinstance(value, (Fraction, int)):
        return EXACT
    if isinstance(value, float):
        return FLOAT
    raise TypeError(f"unsupported coefficient type {type(value).__name__}")


def coerce(value, field: str) -> Coefficient:
    """Convert ``value`` into ``field``.

    Python ints are exact and promote to either field.  A Fraction never
    silently becomes a float, nor a float a Fraction.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not coefficients")
    if field == EXACT:
        if isinstance(value, Fraction):
            return value
        if isinstance(value, int):
            return Fraction(value)
        raise FieldMismatchError(f"float coefficient {value!r} in exact field")
    if field == FLOAT:
        if isinstance(value, float):
            return value
        if isinstance(value, int):
            return float(value)
        raise FieldMismatchError(f"exact coefficient {value!r} in float field")
    raise ValueError(f"unknown field {field!r}")


def infer_field(values: Iterable) -> str:
    """Common field of ``values``; all-int input counts as exact."""
    fields = {field_of(v) for v in values if type(v) is not int}
    if len(fields) > 1:
        raise FieldMismatchError("coefficients mix exact and float values")
    return fields.pop() if fields else EXACT


def convert(value: Coefficient, field: str) -> Coefficient:
    """Explicit field conversion (the only sanctioned way across fields)."""
    if field == FLOAT:
        return float(value)
    if isinstance(value, float):
        return Fraction(value)
    return Fraction(value)


def falling(x: int, k: int) -> int:
    """Falling factorial ``x (x-1) ... (x-k+1)``; 1 when ``k == 0``."""
    out = 1
    for i in range(k):
        out *= x - i
    return out


@dataclass(frozen=True)
class TaylorPoly:
    """``sum(coeffs[j] t**j) + O(t**(trunc + 1))``.

    ``coeffs`` shorter than ``trunc + 1`` are padded with zeros; longer is an
    error.  ``field`` is inferred from the coefficients unless given.
    """

    coeffs: tuple
    trunc: int
    field: str

    def __init__(self, coeffs: Sequence = (), trunc: int | None = None, field: str | None = None):
        coeffs = list(coeffs)
        if trunc is None:
            trunc = len(coeffs) - 1
        if trunc < 0:
            raise ValueError("truncation order must be >= 0")
        if len(coeffs) > trunc + 1:
            raise ValueError(
                f"{len(coeffs)} coefficients exceed truncation order {trunc}"
            )
        if field is None:
            field = infer_field(coeffs)
        cs = [coerce(c, field) for c in coeffs]
        zero = coerce(0, field)
        cs.extend([zero] * (trunc + 1 - len(cs)))
        object.__setattr__(self, "coeffs", tuple(cs))
        object.__setattr__(self, "trunc", trunc)
        object.__setattr__(self, "field", field)

    # constructors ---------------------------------------------------------

    @classmethod
    def zero(cls, trunc: int, field: str = EXACT) -> "TaylorPoly":
        return cls((), trunc, field)

    @classmethod
    def one(cls, trunc: int, field: str = EXACT) -> "TaylorPoly":
        return cls((1,), trunc, field)

    @classmethod
    def identity(cls, trunc: int, field: str = EXACT) -> "TaylorPoly":
        if trunc < 1:
            raise ValueError("identity series needs trunc >= 1")
        return cls((0, 1), trunc, field)

    @classmethod
    def monomial(cls, degree: int, trunc: int, coeff=1, field: str | None = None) -> "TaylorPoly":
        if field is None:
            field = infer_field([coeff])
        cs = [0] * degree + [coeff]
        return cls(cs[: trunc + 1], trunc, field)

    # basic queries --------------------------------------------------------

    def valuation(self) -> int:
        for j, c in enumerate(self.coeffs):
            if c != 0:
                return j
        return self.trunc + 1

    def __getitem__(self, j: int) -> Coefficient:
        return self.coeffs[j]

    def __len__(self) -> int:
        return len(self.coeffs)

    def truncate(self, trunc: int) -> "TaylorPoly":
        if trunc > self.trunc:
            raise ValueError(f"cannot raise truncation order {self.trunc} to {trunc}")
        return TaylorPoly(self.coeffs[: trunc + 1], trunc, self.field)

    def to_field(self, field: str) -> "TaylorPoly":
        if field == self.field:
            return self
        return TaylorPoly([convert(c, field) for c in self.coeffs], self.trunc, field)

    def shift(self, k: int) -> "TaylorPoly":
        """Multiply by ``t**k``; negative ``k`` divides (needs valuation >= -k)."""
        if k >= 0:
            zero = coerce(0, self.field)
            return TaylorPoly((zero,) * k + self.coeffs, self.trunc + k, self.field)
        k = -k
        if self.valuation() < k:
            raise ValueError(f"series is not divisible by t^{k}")
        if self.trunc < k:
            raise ValueError("division by t^k leaves no known coefficients")
        return TaylorPoly(self.coeffs[k:], self.trunc - k, self.field)

    def scale(self, c) -> "TaylorPoly":
        c = coerce(c, self.field)
        return TaylorPoly([c * x for x in self.coeffs], self.trunc, self.field)

    def __add__(self, other):
        return add(self, other)

    def __sub__(self, other):
        return add(self, -other)

    def __neg__(self):
        return TaylorPoly([-c for c in self.coeffs], self.trunc, self.field)

    def __mul__(self, other):
        if isinstance(other, TaylorPoly):
            return mul(self, other)
        return self.scale(other)

    __rmul__ = __mul__

    def __call__(self, t):
        return evaluate(self, t)

    def __str__(self) -> str:
        parts = []
        for j, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if j == 0:
                parts.append(f"{c}")
            elif j == 1:
                parts.append(f"{c}*t")
            else:
                parts.append(f"{c}*t^{j}")
        body = " + ".join(parts) if parts else "0"
        return f"{body} + O(t^{self.trunc + 1})"


def _check_same_field(p: TaylorPoly, q: TaylorPoly) -> str:
    if p.field != q.field:
        raise FieldMismatchError(f"cannot combine {p.field} and {q.field} series")
    return p.field


def _conv(a: Sequence, b: Sequence, n: int, zero) -> list:
    """Cauchy product of coefficient lists, kept through index ``n``."""
    out = [zero] * (n + 1)
    for i, ai in enumerate(a[: n + 1]):
        if ai == 0:
            continue
        for j, bj in enumerate(b[: n + 1 - i]):
            out[i + j] += ai * bj
    return out


def add(p: TaylorPoly, q: TaylorPoly) -> TaylorPoly:
    """Coefficient-wise sum; the result is known through ``min(K_p, K_q)``."""
    field = _check_same_field(p, q)
    k = min(p.trunc, q.trunc)
    return TaylorPoly([p.coeffs[j] + q.coeffs[j] for j in range(k + 1)], k, field)


def mul(p: TaylorPoly, q: TaylorPoly) -> TaylorPoly:
    """Cauchy product.

    The unknown tail of ``p`` is ``O(t^{K_p+1})`` and gets multiplied by a
    series of valuation ``v(q)``, so the product is known through
    ``min(K_p + v(q), K_q + v(p))`` (capped at ``K_p + K_q``).
    """
    field = _check_same_field(p, q)
    k = min(p.trunc + q.valuation(), q.trunc + p.valuation(), p.trunc + q.trunc)
    return TaylorPoly(_conv(p.coeffs, q.coeffs, k, coerce(0, field)), k, field)


def power(p: TaylorPoly, e: int) -> TaylorPoly:
    """Integer power ``e >= 1`` by repeated :func:`mul`."""
    if e < 1:
        raise ValueError("power needs e >= 1")
    out = p
    for _ in range(e - 1):
        out = mul(out, p)
    return out


def differentiate(p: TaylorPoly) -> TaylorPoly:
    """Term-wise derivative; exactly one order of information is lost."""
    if p.trunc < 1:
        raise ValueError("differentiating a series known only through t^0")
    return TaylorPoly([j * p.coeffs[j] for j in range(1, p.trunc + 1)], p.trunc - 1, p.field)


def compose(outer: TaylorPoly, inner: TaylorPoly) -> TaylorPoly:
    """``outer(inner(t))`` by Horner's rule over the truncated series ring.

    ``inner`` must have zero constant term.  The result is known through
    ``min(K_outer * v(inner), K_inner)``.
    """
    field = _check_same_field(outer, inner)
    v = inner.valuation()
    if v < 1:
        raise ValueError("inner series must have zero constant term")
    k = min(outer.trunc * v, inner.trunc)
    zero = coerce(0, field)
    acc = [zero] * (k + 1)
    acc[0] = outer.coeffs[outer.trunc]
    for j in range(outer.trunc - 1, -1, -1):
        acc = _conv(acc, inner.coeffs, k, zero)
        acc[0] += outer.coeffs[j]
    return TaylorPoly(acc, k, field)


def binomial_series(alpha, trunc: int) -> TaylorPoly:
    """``(1 + s)**alpha`` through ``s**trunc``, exact.

    Uses ``C(alpha, j+1) = C(alpha, j) * (alpha - j) / (j + 1)``.
    """
    if trunc < 0:
        raise ValueError("truncation order must be >= 0")
    alpha = Fraction(alpha)
    cs = [Fraction(1)]
    for j in range(trunc):
        cs.append(cs[-1] * (alpha - j) / (j + 1))
    return TaylorPoly(cs, trunc, EXACT)


def mth_root_normalized(p: TaylorPoly, m: int) -> TaylorPoly:
    """The series ``t * (p / t**m) ** (1/m)`` for ``p = t**m + ...``.

    ``p`` must have valuation ``m`` and leading coefficient exactly 1 (divide
    by the leading coefficient first).  The result has leading term ``t`` and
    is known through ``t**(K_p - m + 1)``.
    """
    if m < 1:
        raise ValueError("root index must be >= 1")
    if p.valuation() != m:
        raise ValueError(f"expected valuation {m}, got {p.valuation()}")
    if p.coeffs[m] != 1:
        raise ValueError(f"leading coefficient must be 1, got {p.coeffs[m]}")
    s = p.shift(-m)
    s = TaylorPoly((coerce(0, p.field),) + s.coeffs[1:], s.trunc, p.field)
    root = compose(binomial_series(Fraction(1, m), s.trunc).to_field(p.field), s)
    return root.shift(1)


def revert(p: TaylorPoly) -> TaylorPoly:
    """Compositional inverse of a series with valuation 1.

    Solves ``compose(p, q) = t`` coefficient by coefficient.  The coefficient
    of ``t**n`` in ``p(q)`` is ``p_1 q_n`` plus terms that only involve
    ``q_1 .. q_{n-1}``, so the system is triangular.  Powers of ``q`` are
    tracked in a table and grown one column at a time.
    """
    if p.valuation() != 1:
        raise ValueError(f"reversion needs valuation 1, got {p.valuation()}")
    field = p.field
    zero = coerce(0, field)
    k = p.trunc
    p1 = p.coeffs[1]
    q = [zero] * (k + 1)
    q[1] = coerce(1, field) / p1
    # pw[j][i] = coefficient of t^i in q^j
    pw = [[zero] * (k + 1) for _ in range(k + 1)]
    pw[1][1] = q[1]
    for n in range(2, k + 1):
        s = zero
        for j in range(2, n + 1):
            acc = zero
            for i in range(1, n - j + 2):
                acc += q[i] * pw[j - 1][n - i]
            pw[j][n] = acc
            s += p.coeffs[j] * acc
        q[n] = -s / p1
        pw[1][n] = q[n]
    return TaylorPoly(q, k, field)


def evaluate(p: TaylorPoly, t):
    """Horner evaluation of the stored polynomial as float.

    Works elementwise when ``t`` is a numpy array.
    """
    acc = 0.0
    for c in reversed(p.coeffs):
        acc = acc * t + float(c)
    return acc


def jet_nth_derivative(jet, trunc: int) -> TaylorPoly:
    """``u^{(n)}(t)`` as a series, for ``u = sum_k a_{m+k} t^{m+k}``.

    ``jet`` is anything with ``n``, ``m``, ``field`` and ``coeff(k)``
    (see :class:`jetrec.forward.SolutionJet`).  Coefficients beyond the jet's
    stored ones are zero.
    """
    if trunc < 0:
        raise ValueError("truncation order must be >= 0")
    n, m = jet.n, jet.m
    zero = coerce(0, jet.field)
    cs = [zero] * (trunc + 1)
    for k in range(trunc - (m - n) + 1):
        a = jet.coeff(k)
        if a != 0:
            cs[m - n + k] = a * falling(m + k, n)
    return TaylorPoly(cs, trunc, jet.field)

