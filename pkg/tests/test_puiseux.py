from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from jetrec.formats import parse_puiseux, serialize_puiseux
from jetrec.puiseux import PuiseuxSeries, compare, evaluate, leading_exponent, to_callable

F = Fraction
CUBE = PuiseuxSeries(2, 3, 1, {0: 6}, trunc_j=4)


@st.composite
def puiseux(draw):
    m = draw(st.integers(1, 8))
    n = draw(st.integers(1, m))
    a = draw(st.fractions(min_value=F(1, 10), max_value=5, max_denominator=10))
    J = draw(st.integers(0, 6))
    qs = draw(st.lists(st.fractions(min_value=-9, max_value=9, max_denominator=20), min_size=J + 1, max_size=J + 1))
    return PuiseuxSeries.from_coeffs(n, m, a, qs)


def test_leading_exponent_examples():
    assert leading_exponent(CUBE) == F(1, 3)
    assert leading_exponent(PuiseuxSeries(3, 3, 2, {0: 12})) == 0
    assert leading_exponent(PuiseuxSeries(2, 4, 1, {0: 12})) == F(1, 2)
    with pytest.raises(ValueError):
        leading_exponent(PuiseuxSeries(2, 4, 1, {}))


def test_evaluate_examples():
    assert evaluate(CUBE, 0.001) == pytest.approx(0.6, rel=1e-14)
    assert evaluate(CUBE, 0.0) == 0
    sq = PuiseuxSeries.from_coeffs(2, 2, 1, [2, 6, -3])
    assert evaluate(sq, 0.01) == pytest.approx(2.57, rel=1e-15)
    assert evaluate(sq, 0.0) == 2
    with pytest.raises(ValueError):
        evaluate(CUBE, -1.0)


def test_evaluate_negative_scale():
    ps = PuiseuxSeries(1, 2, -4, {0: 2})
    assert evaluate(ps, -1.0) == pytest.approx(2 * 0.25 ** 0.5)
    with pytest.raises(ValueError):
        evaluate(ps, 1.0)


def test_evaluate_arrays():
    us = np.array([0.0, 0.008, 0.001])
    np.testing.assert_allclose(evaluate(CUBE, us), [0, 1.2, 0.6], rtol=1e-14)


def test_compare():
    assert compare(CUBE, CUBE).passed
    near = PuiseuxSeries(2, 3, 1.0, {0: 6 + 1e-12}, trunc_j=4)
    as_float = PuiseuxSeries(2, 3, 1.0, {0: 6.0}, trunc_j=4)
    assert compare(as_float, near, tol=1e-9).passed
    assert not compare(CUBE, PuiseuxSeries(2, 3, 1, {0: 6, 1: F(1, 10**12)})).passed
    rep = compare(CUBE, PuiseuxSeries(2, 4, 1, {0: 12}))
    assert not rep.structural_match and not rep.passed


def test_to_callable():
    h = to_callable(CUBE)
    assert h(0.008) == pytest.approx(1.2, rel=1e-14)
    assert to_callable(PuiseuxSeries(2, 3, 1, {}))(0.5) == 0
    assert to_callable(PuiseuxSeries.from_coeffs(2, 2, 1, [2, 6]))(0.0) == 2


def test_invariants_enforced():
    with pytest.raises(ValueError):
        PuiseuxSeries(3, 2, 1, {0: 1})
    with pytest.raises(ValueError):
        PuiseuxSeries(2, 3, 0, {0: 1})
    with pytest.raises(ValueError):
        PuiseuxSeries(2, 3, 1, [(1, 1), (1, 2)])
    with pytest.raises(ValueError):
        PuiseuxSeries(2, 3, 1, {5: 1}, trunc_j=4)


@given(puiseux(), st.fractions(min_value=-3, max_value=3, max_denominator=7),
       st.lists(st.floats(0, 1), min_size=1, max_size=5))
def test_linear_in_coefficients(ps, c, us):
    us = np.array(us) * float(ps.a)
    np.testing.assert_allclose(evaluate(ps.scaled(c), us), float(c) * evaluate(ps, us), rtol=1e-12, atol=1e-12)


@given(puiseux())
def test_leading_exponent_range(ps):
    if not ps.terms:
        return
    e = leading_exponent(ps)
    assert 0 <= e < 1 or ps.terms[0][0] > 0
    if ps.terms[0][0] == 0:
        assert (e == 0) == (ps.m == ps.n)


@given(puiseux())
def test_serialization_round_trip(ps):
    assert parse_puiseux(serialize_puiseux(ps)) == ps
