import json

import pytest

from squadb.catalog import CONCAVE, ConvexityClaim, TestFunction, hm94, lookup
from squadb.errors import ConfigurationError
from squadb.harness import (SLACK_TOL, RuleSpec, SuiteGrid, default_rules,
                            hadamard_check, run_suite, tightness_scan, verify_case)
from squadb.oracle import OracleConfig, integrate
from squadb.rules import Interval, midpoint, simpson, trapezoid

UNIT = Interval(0.0, 1.0)


@pytest.fixture(scope="module")
def report():
    return run_suite()


class TestVerifyCase:
    def test_square_trapezoid(self, square):
        rec = verify_case(square, UNIT, trapezoid(), "power_mean", 1.0, 1.0)
        assert rec.lhs == pytest.approx(1 / 6, abs=1e-14)
        assert rec.rhs == pytest.approx(1 / 4, abs=1e-15)
        assert rec.passed and not rec.skipped
        assert rec.slack == pytest.approx(1 / 12)

    def test_square_simpson(self, square):
        rec = verify_case(square, UNIT, simpson(), "power_mean", 1.0, 1.0)
        assert rec.lhs <= 1e-14
        assert rec.passed

    def test_power_holder(self):
        fn = lookup("power_s_plus_1", s=0.4)
        rec = verify_case(fn, UNIT, midpoint(), "holder", 0.4, 2.0)
        assert rec.passed and not rec.skipped
        assert rec.p == pytest.approx(2.0)

    def test_missing_claim_is_skipped(self, square):
        rec = verify_case(square, UNIT, midpoint(), "concave", 1.0, 2.0)
        assert rec.skipped
        assert "no claim" in rec.reason

    def test_interval_outside_domain_is_skipped(self):
        fn = hm94(0.0, 1.0, 0.0, 0.5)
        rec = verify_case(fn, UNIT, midpoint(), "power_mean", 1.0, 1.0)
        assert rec.skipped

    def test_pass_rule(self, square):
        rec = verify_case(square, UNIT, trapezoid(), "power_mean", 1.0, 1.0)
        assert rec.passed == (rec.slack >= -(SLACK_TOL + rec.oracle_err_estimate))


class TestHadamard:
    @pytest.mark.parametrize("s", (0.3, 0.5, 0.7))
    def test_equality_case(self, s):
        fn = hm94(0.0, 1.0, 0.0, s)
        rec = hadamard_check(fn, UNIT, s, sense="convex")
        assert rec.passed
        assert rec.detail["binding"] == "upper"
        assert abs(rec.detail["upper_slack"]) <= 1e-12
        assert rec.detail["end_term"] == pytest.approx(1 / (s + 1), abs=1e-15)

    def test_classical_square(self, square):
        rec = hadamard_check(square, UNIT, 1.0)
        d = rec.detail
        assert d["mid_term"] == 0.25
        assert d["mean"] == pytest.approx(1 / 3, abs=1e-15)
        assert d["end_term"] == 0.5
        assert rec.passed

    def test_reversed_for_concave(self):
        fn = hm94(0.0, 1.0, 0.0, 0.5)  # sqrt
        rec = hadamard_check(fn, Interval(0.0, 2.0), 1.0, sense=CONCAVE)
        d = rec.detail
        assert d["sense"] == CONCAVE
        assert d["mid_term"] >= d["mean"] >= d["end_term"]
        assert rec.passed

    def test_no_claim_skips(self, square):
        assert hadamard_check(square, UNIT, 0.5).skipped


class TestSuite:
    def test_default_suite_all_pass(self, report):
        c = report.counts
        assert c["fail"] == 0
        assert c["pass"] >= 1000
        assert sum(c.values()) == len(report.records)
        for r in report.records:
            if not r.skipped:
                assert r.slack >= -(SLACK_TOL + r.oracle_err_estimate)

    def test_coverage(self, report):
        engines = {r.engine for r in report.records}
        assert {"power_mean", "holder", "concave", "ostrowski_pm", "ostrowski_holder",
                "ostrowski_concave", "classic_ostrowski", "hadamard"} <= engines
        kinds = {r.rule.split("(")[0] for r in report.records}
        assert {"midpoint", "trapezoid", "simpson", "gen_midpoint", "gen_trapezoid",
                "ostrowski"} <= kinds

    def test_sorted_by_case_id(self, report):
        ids = [r.case_id for r in report.records]
        assert ids == sorted(ids)
        assert len(set(ids)) == len(ids)

    def test_tightness_ratio_bounded(self, report):
        ratio, cid = report.max_ratio()
        assert 0 <= ratio <= 1 + 1e-9
        assert cid is not None

    def test_deterministic(self):
        grid = SuiteGrid((lookup("square"), lookup("three_halves")), ((0.0, 1.0),),
                         default_rules()[:6])
        assert run_suite(grid).to_json() == run_suite(grid).to_json()

    def test_json_schema(self, report):
        doc = json.loads(report.to_json())
        assert set(doc) == {"schema_version", "config", "records", "summary"}
        assert doc["summary"]["counts"]["fail"] == 0
        assert doc["config"]["oracle"]["rel_tol"] == 1e-12
        rec = doc["records"][0]
        for key in ("case_id", "function", "interval", "rule", "engine", "lhs", "rhs",
                    "slack", "oracle_err_estimate", "passed"):
            assert key in rec

    def test_simpson_on_square(self, square):
        grid = SuiteGrid((square,), ((0.0, 1.0), (0.5, 2.0)),
                         (RuleSpec("simpson", lam=0.5, theta=2 / 3),), hadamard=False)
        rep = run_suite(grid)
        assert rep.records
        assert all(r.lhs <= 1e-12 for r in rep.records)

    def test_corrupted_claim_aborts(self, square):
        bad = TestFunction("bad_square", (), (0.0, 4.0), square.eval, square.deriv,
                           (ConvexityClaim(1.0, 2.0, CONCAVE),))
        grid = SuiteGrid((bad,), ((0.0, 1.0),), default_rules())
        with pytest.raises(ConfigurationError, match="bad_square"):
            run_suite(grid)


class TestTightness:
    def test_scan(self, square):
        grid = SuiteGrid((square,), ((0.0, 1.0),),
                         (RuleSpec("trapezoid", lam=0.5, theta=0.0),
                          RuleSpec("simpson", lam=0.5, theta=2 / 3)),
                         engines=("power_mean",), q_grid=(1.0,), hadamard=False)
        rep = tightness_scan(grid)
        ratios = [r.ratio for r in rep.records]
        assert ratios == sorted(ratios, reverse=True)
        by_rule = {(r.rule, r.s): r.ratio for r in rep.records}
        assert by_rule[("trapezoid", 1.0)] == pytest.approx(2 / 3, abs=1e-12)
        assert by_rule[("simpson", 1.0)] <= 1e-12
        assert rep.to_csv().splitlines()[0] == "case_id,lhs,rhs,ratio"

    def test_top_entry_sound(self):
        rep = tightness_scan()
        assert rep.records[0].ratio <= 1 + 1e-9


class TestConcaveClosingInequalities:
    """Midpoint-value bounds for concave |f'|**q (|f'| concave as well)."""

    def test_three_rules(self, catalog):
        cfg = OracleConfig()
        intervals = [(0.0, 1.0), (0.25, 0.75), (0.5, 2.0), (1.0, 3.5)]
        checked = 0
        for fn in catalog:
            for claim in fn.deriv_claims():
                if claim.sense != CONCAVE:
                    continue
                s, q = claim.s, claim.q
                p = q / (q - 1)
                for a, b in intervals:
                    if not fn.admits(a, b):
                        continue
                    w = b - a
                    mean = integrate(fn.f, a, b, cfg)[0] / w
                    dmid = abs(fn.fp((a + b) / 2))
                    sf = 0.5 ** ((1 - s) / q)
                    kp = (1 / (p + 1)) ** (1 / p)
                    trap = abs((fn.f(a) + fn.f(b)) / 2 - mean)
                    mid = abs(fn.f((a + b) / 2) - mean)
                    simp = abs((fn.f(a) + 4 * fn.f((a + b) / 2) + fn.f(b)) / 6 - mean)
                    assert trap <= w / 2 * kp * sf * dmid + 1e-9
                    assert mid <= w / 2 * kp * sf * dmid + 1e-9
                    assert simp <= w / 12 * ((1 + 2 ** (p + 1)) / (3 * (p + 1))) ** (1 / p) \
                        * sf * dmid + 1e-9
                    checked += 1
        assert checked > 0
