import math

import pytest
from hypothesis import given, strategies as st

from squadb.bounds import DerivData, ExponentPair, bound_holder, bound_power_mean
from squadb.errors import DomainError, ParameterError
from squadb.means import (PROP_A, PROP_LT, PROP_Q, PROP_S, PROP_WIDTHS, mean_arith,
                          mean_log, mean_plog, mean_weighted, proposition1_gap,
                          proposition1_rhs_transcribed, proposition2_gap,
                          proposition2_rhs_transcribed, proposition_table)
from squadb.oracle import OracleConfig, integrate
from squadb.rules import Interval, RuleParams

positive = st.floats(0.01, 100.0)


def prop_grid():
    for a in PROP_A:
        for w in PROP_WIDTHS:
            for s in PROP_S:
                for q in PROP_Q:
                    if s * q < 1:
                        for lam in PROP_LT:
                            for theta in PROP_LT:
                                yield a, a + w, s, q, lam, theta


class TestMeans:
    def test_examples(self):
        assert mean_log(1, math.e) == pytest.approx(math.e - 1, abs=1e-15)
        assert mean_plog(2.0, 5.0, 1.0) == mean_arith(2.0, 5.0)
        assert mean_weighted(2, 4, 0.25) == 3.5

    @given(positive, positive)
    def test_means_lie_between(self, a, b):
        if abs(a - b) < 1e-9 * max(a, b):
            return
        lo, hi = min(a, b), max(a, b)
        assert lo <= mean_log(a, b) <= hi
        for p in (-2.0, -0.5, 0.5, 1.0, 2.4, 3.0):
            assert lo * (1 - 1e-12) <= mean_plog(a, b, p) <= hi * (1 + 1e-12)
        assert lo <= mean_arith(a, b) <= hi

    @given(positive, positive)
    def test_plog_one_is_arith(self, a, b):
        if a != b:
            assert mean_plog(a, b, 1.0) == pytest.approx(mean_arith(a, b), rel=1e-12)

    @pytest.mark.parametrize("s", (0.2, 0.4, 0.6, 0.8))
    @pytest.mark.parametrize("a,b", [(0.5, 1.0), (1.0, 2.0), (2.0, 4.0)])
    def test_plog_power_is_mean_integral(self, s, a, b):
        v, _ = integrate(lambda t: t ** (s + 1), a, b, OracleConfig(rel_tol=1e-14))
        assert abs(mean_plog(a, b, s + 1) ** (s + 1) - v / (b - a)) <= 1e-12

    def test_domain_errors(self):
        with pytest.raises(DomainError):
            mean_log(1.0, 1.0)
        with pytest.raises(DomainError):
            mean_log(-1.0, 2.0)
        with pytest.raises(DomainError):
            mean_plog(1.0, 2.0, 0.0)
        with pytest.raises(DomainError):
            mean_plog(1.0, 2.0, -1.0)
        with pytest.raises(DomainError):
            mean_weighted(1.0, 2.0, 1.5)


class TestPropositions:
    def test_example_prop1(self):
        lhs, rhs = proposition1_gap(1.0, 2.0, 0.4, 2.0, 0.5, 0.5)
        v, _ = integrate(lambda t: t ** 1.4, 1.0, 2.0)
        q = 0.5 * (0.5 * 1 + 0.5 * 2 ** 1.4) + 0.5 * 1.5 ** 1.4
        assert lhs == pytest.approx(abs(q - v), abs=1e-12)
        assert lhs <= rhs

    def test_example_prop2(self):
        lhs, rhs = proposition2_gap(1.0, 2.0, 0.4, ExponentPair(2.0, 2.0), 0.5, 0.5)
        assert lhs <= rhs

    def test_theta_one_substitution(self):
        a, b, s = 1.0, 3.0, 0.3
        lhs, _ = proposition1_gap(a, b, s, 2.0, 0.5, 1.0)
        assert lhs == pytest.approx(
            abs(mean_arith(a, b) ** (s + 1) - mean_plog(a, b, s + 1) ** (s + 1)), abs=1e-14)

    def test_theta_zero_lambda_one_substitution(self):
        a, b, s = 1.0, 3.0, 0.3
        lhs, _ = proposition2_gap(a, b, s, 2.0, 1.0, 0.0)
        assert lhs == pytest.approx(abs(a ** (s + 1) - mean_plog(a, b, s + 1) ** (s + 1)), abs=1e-14)

    def test_narrow_interval(self):
        lhs, rhs = proposition1_gap(1.0, 1.0 + 1e-8, 0.4, 2.0, 0.5, 0.5)
        assert lhs <= rhs + 1e-10
        assert rhs < 1e-7

    def test_grid_holds(self):
        n = 0
        for a, b, s, q, lam, theta in prop_grid():
            l1, r1 = proposition1_gap(a, b, s, q, lam, theta)
            l2, r2 = proposition2_gap(a, b, s, q, lam, theta)
            assert l1 <= r1 + 1e-10
            assert l2 <= r2 + 1e-10
            n += 1
        assert n == 450

    def test_rhs_matches_engines_and_transcription(self):
        for a, b, s, q, lam, theta in prop_grid():
            iv, rp = Interval(a, b), RuleParams(lam, theta)
            dd = DerivData.from_derivative(lambda t: (s + 1) * t ** s, iv, rp)
            pq = ExponentPair.conjugate(q)
            _, r1 = proposition1_gap(a, b, s, q, lam, theta)
            _, r2 = proposition2_gap(a, b, s, pq, lam, theta)
            assert r2 == pytest.approx(bound_holder(dd, iv, rp, s, pq).value, abs=1e-12)
            assert r1 == pytest.approx(bound_power_mean(dd, iv, rp, s, q).value, abs=1e-12)
            assert r1 == pytest.approx(proposition1_rhs_transcribed(a, b, s, q, lam, theta), abs=1e-12)
            assert r2 == pytest.approx(proposition2_rhs_transcribed(a, b, s, pq, lam, theta), abs=1e-12)

    def test_preconditions(self):
        with pytest.raises(ParameterError):
            proposition1_gap(2.0, 1.0, 0.4, 2.0, 0.5, 0.5)
        with pytest.raises(ParameterError):
            proposition1_gap(1.0, 2.0, 0.5, 2.0, 0.5, 0.5)  # s must be < 1/q
        with pytest.raises(ParameterError):
            proposition2_gap(1.0, 2.0, 0.2, ExponentPair(2.0, 3.0), 0.5, 0.5)

    def test_table(self):
        rows = proposition_table()
        assert len(rows) == 450
        assert {"lhs", "rhs_prop1", "rhs_prop2"} <= set(rows[0])
