import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from jetrec.extrapolation import geometric_mesh, richardson_limit


def test_mesh():
    np.testing.assert_allclose(geometric_mesh(1.0, 0.5, 3), [1, 0.5, 0.25, 0.125])


def test_removes_geometric_terms():
    rho = 0.5
    vals = [2 + 3 * rho ** i - 5 * rho ** (2 * i) for i in range(12)]
    est = richardson_limit(vals, [rho, rho ** 2, rho ** 3])
    assert est.value == pytest.approx(2, abs=1e-13)
    assert est.error < 1e-12


def test_fractional_ratios():
    # error terms in powers of u^(1/3) on u = 2^-i
    r = 0.5 ** (1 / 3)
    vals = [math.e + 0.7 * r ** i + 0.2 * r ** (2 * i) - 0.1 * r ** (3 * i) for i in range(21)]
    est = richardson_limit(vals, [r ** k for k in range(1, 9)])
    assert est.value == pytest.approx(math.e, abs=1e-10)


def test_constant_sequence_reports_rounding_floor():
    est = richardson_limit([1.0] * 10, [0.5, 0.25])
    assert est.value == 1.0 and est.error > 0


def test_noise_floor():
    est = richardson_limit([0.0] * 10, [0.5], noise=[1e-3] * 10)
    assert est.error >= 1e-3


def test_needs_samples():
    with pytest.raises(ValueError):
        richardson_limit([1.0], [0.5])


@given(st.floats(-10, 10), st.floats(-5, 5), st.floats(-5, 5))
def test_exact_on_two_term_models(L, c1, c2):
    rho = 0.5
    vals = [L + c1 * rho ** i + c2 * rho ** (2 * i) for i in range(16)]
    est = richardson_limit(vals, [rho, rho ** 2, rho ** 3])
    assert est.value == pytest.approx(L, abs=1e-10 * (1 + abs(L) + abs(c1) + abs(c2)))
