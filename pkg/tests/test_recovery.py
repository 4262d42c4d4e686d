from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from jetrec.corpus import CORPUS_JETS, builtin_function, perturbed
from jetrec.forward import SolutionJet, divisor, forward_map
from jetrec.puiseux import FunctionHandle, PuiseuxSeries, to_callable
from jetrec.recovery import (
    DomainExitError,
    InconsistentSeries,
    NoAdmissibleOrder,
    NonIntegerOrder,
    NonPositiveLimit,
    ProbeConfig,
    VanishingFunction,
    crosscheck_uniqueness,
    detect_order,
    recover_jet_numeric,
    recover_jet_symbolic,
    rk4_integrate,
)

F = Fraction


@st.composite
def jets(draw, max_m=6, max_extra=5):
    m = draw(st.integers(1, max_m))
    n = draw(st.integers(1, m))
    a = draw(st.fractions(min_value=F(1, 10), max_value=5, max_denominator=10))
    rest = draw(st.lists(st.fractions(min_value=-5, max_value=5, max_denominator=10), max_size=max_extra))
    return SolutionJet(n, m, [a] + rest)


class TestDetectOrder:
    def test_cube_root(self):
        est = detect_order(builtin_function("ex1"), 2)
        assert est.m == 3 and est.a == pytest.approx(1, abs=1e-8)
        assert est.slope == pytest.approx(1 / 3, abs=1e-10)

    def test_square_root(self):
        est = detect_order(builtin_function("ex4"), 2)
        assert est.m == 4 and est.a == pytest.approx(1, abs=1e-8)

    def test_constant_means_m_equals_n(self):
        est = detect_order(FunctionHandle(lambda u: 2.0 + 0 * u, 1.0), 2)
        assert est.m == 2 and est.a == pytest.approx(1, abs=1e-10)

    def test_linear_is_not_admissible(self):
        with pytest.raises(NoAdmissibleOrder):
            detect_order(FunctionHandle(lambda u: u, 1.0), 1)

    def test_fractional_power_is_not_integer(self):
        with pytest.raises(NonIntegerOrder):
            detect_order(FunctionHandle(lambda u: u ** 0.6, 1.0), 1)

    def test_zero_function(self):
        with pytest.raises(VanishingFunction):
            detect_order(FunctionHandle(lambda u: 0 * u, 1.0), 1)

    def test_negative_needs_reflection(self):
        f = FunctionHandle(lambda u: -6 * np.cbrt(u), 1.0)
        with pytest.raises(NonPositiveLimit):
            detect_order(f, 2)
        est = detect_order(f, 2, ProbeConfig(reflect=True))
        assert est.reflected and est.m == 3 and est.a == pytest.approx(-1, abs=1e-8)

    def test_flat_function(self):
        with pytest.raises(NoAdmissibleOrder):
            detect_order(builtin_function("flat"), 1)

    @pytest.mark.parametrize("name", sorted(CORPUS_JETS))
    def test_corpus(self, name):
        jet = CORPUS_JETS[name]
        assert detect_order(to_callable(forward_map(jet, 4)), jet.n).m == jet.m


class TestSymbolic:
    def test_cubic(self):
        rep = recover_jet_symbolic(PuiseuxSeries(2, 3, 1, {0: 6}, trunc_j=4), 4)
        assert rep.m == 3 and rep.jet == SolutionJet(2, 3, [1]) and rep.mode == "symbolic"

    def test_generic(self):
        ps = PuiseuxSeries.from_coeffs(1, 3, 1, [3, 2, F(-5, 3), F(56, 27), -3])
        assert recover_jet_symbolic(ps).jet == SolutionJet(1, 3, [1, 1])

    def test_header_mismatch(self):
        with pytest.raises(InconsistentSeries):
            recover_jet_symbolic(PuiseuxSeries(2, 3, 2, {0: 6}))

    def test_too_many_terms(self):
        with pytest.raises(InconsistentSeries):
            recover_jet_symbolic(PuiseuxSeries(2, 3, 1, {0: 6}, trunc_j=2), 3)

    def test_float_series(self):
        ps = PuiseuxSeries.from_coeffs(1, 3, 1.0, [3.0, 2.0, -5 / 3, 56 / 27])
        rep = recover_jet_symbolic(ps)
        assert rep.jet.field == "float"
        assert rep.jet.padded(4) == pytest.approx([1, 1, 0, 0], abs=1e-12)

    @given(jets(), st.fractions(min_value=-3, max_value=3, max_denominator=7).filter(bool))
    def test_first_correction_is_linear(self, jet, eps):
        # shifting q_1 by eps moves a_{m+1} by eps / D_0 and nothing before it
        ps = forward_map(jet, 2)
        moved = PuiseuxSeries(ps.n, ps.m, ps.a, {**dict(ps.terms), 1: ps.coeff(1) + eps}, ps.trunc_j)
        rec = recover_jet_symbolic(moved, 1).jet
        assert rec.coeff(0) == jet.a
        assert rec.coeff(1) - jet.coeff(1) == eps / divisor(jet.n, jet.m, 0)


@given(jets(), st.integers(0, 5))
def test_round_trip(jet, K):
    jet = SolutionJet(jet.n, jet.m, jet.padded(K + 1)[: K + 1])
    assert recover_jet_symbolic(forward_map(jet, K), K).jet == jet


@given(jets(max_extra=3), st.integers(0, 3))
def test_recovered_jet_maps_back(jet, K):
    ps = forward_map(jet, K)
    assert forward_map(recover_jet_symbolic(ps).jet, K) == ps


class TestNumeric:
    def test_cube_root(self):
        rep = recover_jet_numeric(builtin_function("ex1"), 2, 3)
        assert rep.m == 3 and not rep.truncated
        assert rep.jet.padded(4) == pytest.approx([1, 0, 0, 0], abs=1e-6)

    @pytest.mark.parametrize("name", sorted(CORPUS_JETS))
    def test_agrees_with_symbolic(self, name):
        jet = CORPUS_JETS[name]
        ps = forward_map(jet, 4)
        num = recover_jet_numeric(to_callable(ps), jet.n, 3)
        sym = recover_jet_symbolic(ps, 3)
        assert num.m == sym.m and not num.truncated
        assert [float(c) for c in num.jet.padded(4)] == pytest.approx(
            [float(c) for c in sym.jet.padded(4)], abs=1e-6)

    def test_truncates_when_tolerance_unreachable(self):
        rep = recover_jet_numeric(builtin_function("ex1"), 2, 3, ProbeConfig(limit_tol=1e-30))
        assert rep.truncated and rep.requested == 3 and "stage 1" in rep.message
        assert len(rep.jet.coeffs) == 1

    def test_reflection(self):
        f = FunctionHandle(lambda u: -6 * np.cbrt(u), 1.0)
        rep = recover_jet_numeric(f, 2, 2, ProbeConfig(reflect=True))
        assert rep.reflected
        assert rep.jet.padded(3) == pytest.approx([-1, 0, 0], abs=1e-6)

    def test_flat_rejected(self):
        with pytest.raises(NoAdmissibleOrder):
            recover_jet_numeric(builtin_function("flat"), 1, 3)


class TestCrosscheck:
    def test_rk4_cubic(self):
        ps = forward_map(SolutionJet(2, 3, [1]), 4)
        y = rk4_integrate(ps, [0.001, 0.03], 0.1, 0.5, 10_000)
        assert y[0] == pytest.approx(0.125, rel=1e-6)
        verdict = crosscheck_uniqueness(ps, [SolutionJet(2, 3, [1])], 0.1, 0.5)
        assert verdict.passed and verdict.endpoint_errors[0] < 1e-6

    def test_tampered_pair(self):
        jet = SolutionJet(2, 3, [1, 1])
        ps = forward_map(jet, 3)
        other = perturbed(jet, 1, F(1, 10))
        verdict = crosscheck_uniqueness(ps, [jet, other], 0.1, 0.2)
        assert verdict.disagreements == ((0, 1),)
        assert verdict.residuals[0].passed and not verdict.residuals[1].passed
        assert not verdict.passed

    def test_same_endpoints(self):
        ps = forward_map(SolutionJet(2, 3, [1]), 2)
        verdict = crosscheck_uniqueness(ps, [SolutionJet(2, 3, [1])], 0.3, 0.3)
        assert verdict.passed and verdict.notes and verdict.endpoint_errors == (0.0,)

    def test_interval_checked(self):
        ps = forward_map(SolutionJet(2, 3, [1]), 2)
        with pytest.raises(ValueError):
            crosscheck_uniqueness(ps, [SolutionJet(2, 3, [1])], 0.5, 0.1)

    def test_domain_exit(self):
        ps = forward_map(SolutionJet(1, 1, [1]), 0)
        with pytest.raises(DomainExitError):
            rk4_integrate(ps, [-0.1], 0.1, 0.2, 10)


@given(st.integers(1, 20), st.integers(0, 20), st.data())
def test_divisors_nonzero(m, k, data):
    assert divisor(data.draw(st.integers(1, m)), m, k) != 0


@given(st.integers(1, 10), st.integers(0, 40))
def test_exponent_map_increasing(n, d):
    m = n + d
    assert F(m - n, m) < F(m + 1 - n, m + 1)
