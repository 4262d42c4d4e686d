"""Independent reference computations on plain coefficient lists.

Nothing here imports the package: these are the oracles the tests compare
against.
"""

from fractions import Fraction


def pmul(a, b, k=None):
    """Product of coefficient lists, cut after degree ``k`` if given."""
    top = len(a) + len(b) - 2 if k is None else k
    out = [Fraction(0)] * (top + 1)
    for i, x in enumerate(a):
        if i > top:
            break
        for j, y in enumerate(b):
            if i + j > top:
                break
            out[i + j] += x * y
    return out


def ppow(a, e, k):
    out = [Fraction(1)] + [Fraction(0)] * k
    for _ in range(e):
        out = pmul(out, a, k)
    return out


def pcompose(outer, inner, k):
    """``outer(inner(t))`` through degree ``k`` by summing powers."""
    out = [Fraction(0)] * (k + 1)
    for e, c in enumerate(outer):
        if c == 0:
            continue
        for i, x in enumerate(ppow(inner, e, k)):
            out[i] += c * x
    return out


def reciprocal(a, k):
    """``1 / a(t)`` through degree ``k`` (needs ``a[0] != 0``)."""
    out = [Fraction(1) / a[0]]
    for n in range(1, k + 1):
        s = sum((a[i] * out[n - i] for i in range(1, min(n, len(a) - 1) + 1)), Fraction(0))
        out.append(-s / a[0])
    return out


def lagrange_revert(p, k):
    """Inverse series of ``p = p1 t + p2 t^2 + ...`` through degree ``k``.

    ``[x^j] t(x) = (1/j) [t^(j-1)] (t / p(t))^j``.
    """
    phi = reciprocal(list(p[1:]) or [Fraction(0)], k)
    out = [Fraction(0)] * (k + 1)
    for j in range(1, k + 1):
        out[j] = ppow(phi, j, j - 1)[j - 1] / j
    return out


def falling(x, k):
    out = 1
    for i in range(k):
        out *= x - i
    return out


def forward_terms(n, m, coeffs, J):
    """``q_0 .. q_J`` of ``f`` by solving ``u^(n)(t) = sum_j q_j x(t)^(m-n+j)`` directly.

    ``x(t) = (u/a)^(1/m)`` is built by Newton's iteration on ``x^m = u/a``
    and the ``q_j`` come from a triangular solve; no series reversion.
    """
    a = Fraction(coeffs[0])
    top = m - n + J
    K = top + 1
    ua = [Fraction(0)] * m + [Fraction(c) / a for c in coeffs]
    ua = (ua + [Fraction(0)] * (m + K + 1))[: m + K + 1]
    # x = t * r(t) with r^m = ua / t^m = 1 + ...
    s = ua[m:]
    r = [Fraction(1)] + [Fraction(0)] * K
    for _ in range(K + 2):
        rm1 = ppow(r, m - 1, K)
        rm = pmul(rm1, r, K)
        inv = reciprocal([m * c for c in rm1], K)
        r = [x - y for x, y in zip(r, pmul([p - q for p, q in zip(rm, s)], inv, K))]
    x = [Fraction(0)] + r[:K]
    un = [Fraction(0)] * (K + 1)
    for k, c in enumerate(coeffs):
        e = m + k - n
        if 0 <= e <= K and c != 0:
            un[e] = Fraction(c) * falling(m + k, n)
    q = []
    rest = un[:]
    for j in range(J + 1):
        e = m - n + j
        xe = ppow(x, e, K)
        qj = rest[e] / xe[e]
        q.append(qj)
        rest = [p - qj * v for p, v in zip(rest, xe)]
    return q
