"""Verification harness: every bound checked against the oracle deviation.

A case pairs a catalog function, an interval, a rule and an (engine, s, q)
combination backed by one of the function's claims.  ``lhs`` is the oracle
deviation, ``rhs`` the engine bound from exact derivative values, and a case
passes when ``rhs - lhs >= -(SLACK_TOL + oracle error)``.
"""

import hashlib
import json
import math
from dataclasses import asdict, dataclass, field

from . import __version__
from .bounds import (DerivData, admissible_engines, classic_ostrowski, ostrowski_bound,
                     run_engine)
from .catalog import CONCAVE, CONVEX, DEFAULT_Q_GRID, builtin_catalog, validate_catalog
from .errors import ConfigurationError, ParameterError
from .oracle import OracleConfig
from .rules import (Interval, RuleParams, deviation, gen_midpoint, gen_trapezoid,
                    mean_integral)

SCHEMA_VERSION = "1.0"
SLACK_TOL = 1e-9

OSTROWSKI_ENGINES = ("ostrowski_pm", "ostrowski_holder", "ostrowski_concave",
                     "classic_ostrowski")


@dataclass(frozen=True)
class VerificationRecord:
    case_id: str
    function: str
    interval: tuple
    rule: str
    lam: float
    theta: float
    engine: str
    s: float
    q: float
    p: float
    lhs: float
    rhs: float
    slack: float
    oracle_err_estimate: float
    passed: bool
    skipped: bool = False
    reason: str = ""
    detail: dict = field(default_factory=dict)

    @property
    def ratio(self):
        return tightness_ratio(self.lhs, self.rhs)

    def as_dict(self):
        d = asdict(self)
        d["interval"] = list(self.interval)
        return d


@dataclass(frozen=True)
class RuleSpec:
    """A rule in a suite grid.

    ``kind`` is ``"fixed"`` (lam, theta given) or ``"ostrowski"``, where
    ``value`` is the position of x as a fraction of the interval.
    """
    name: str
    kind: str = "fixed"
    lam: float = 0.0
    theta: float = 0.0
    value: float = 0.0

    def resolve(self, iv):
        if self.kind == "ostrowski":
            x = iv.a + self.value * iv.width
            lam = (x - iv.a) / iv.width
            return RuleParams(lam, 1.0, self.name), x
        return RuleParams(self.lam, self.theta, self.name), None


@dataclass(frozen=True)
class SuiteGrid:
    functions: tuple
    intervals: tuple
    rules: tuple
    engines: tuple = ("power_mean", "holder", "concave") + OSTROWSKI_ENGINES
    q_grid: tuple = DEFAULT_Q_GRID
    hadamard: bool = True

    def echo(self):
        return {
            "functions": [fn.label for fn in self.functions],
            "intervals": [list(iv) for iv in self.intervals],
            "rules": [r.name for r in self.rules],
            "engines": list(self.engines),
            "q_grid": list(self.q_grid),
            "hadamard": self.hadamard,
        }


@dataclass
class SuiteReport:
    records: list
    config: dict
    schema_version: str = SCHEMA_VERSION

    @property
    def counts(self):
        c = {"pass": 0, "fail": 0, "skipped": 0}
        for r in self.records:
            if r.skipped:
                c["skipped"] += 1
            elif r.passed:
                c["pass"] += 1
            else:
                c["fail"] += 1
        return c

    @property
    def failures(self):
        return [r for r in self.records if not r.skipped and not r.passed]

    def max_ratio(self):
        best = None
        for r in self.records:
            if r.skipped:
                continue
            if best is None or r.ratio > best.ratio:
                best = r
        return (best.ratio, best.case_id) if best else (0.0, None)

    def summary(self):
        ratio, cid = self.max_ratio()
        return {"counts": self.counts, "total": len(self.records),
                "max_tightness_ratio": ratio, "max_tightness_case": cid,
                "slack_tol": SLACK_TOL}

    def as_dict(self):
        return {"schema_version": self.schema_version, "config": self.config,
                "records": [r.as_dict() for r in self.records],
                "summary": self.summary()}

    def to_json(self):
        return json.dumps(self.as_dict(), sort_keys=True, indent=1) + "\n"

    def to_csv(self):
        lines = ["case_id,lhs,rhs,ratio"]
        for r in self.records:
            if not r.skipped:
                lines.append(f"{r.case_id},{r.lhs!r},{r.rhs!r},{r.ratio!r}")
        return "\n".join(lines) + "\n"


def tightness_ratio(lhs, rhs):
    if rhs > 0.0:
        return lhs / rhs
    return 0.0 if lhs <= SLACK_TOL else math.inf


def case_id(*parts):
    canon = "|".join(_canon(p) for p in parts)
    return hashlib.sha1(canon.encode()).hexdigest()[:16]


def _canon(v):
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, (tuple, list)):
        return "(" + ",".join(_canon(x) for x in v) + ")"
    return str(v)


def _record(cid, fn, iv, rp, engine, s, q, p, lhs, rhs, err, detail=None):
    slack = rhs - lhs
    ok = slack >= -(SLACK_TOL + err)
    return VerificationRecord(cid, fn.label, (iv.a, iv.b), rp.label, rp.lam, rp.theta,
                              engine, s, q, p, lhs, rhs, slack, err, ok,
                              detail=detail or {})


def _skipped(cid, fn, iv, rp, engine, s, q, reason):
    return VerificationRecord(cid, fn.label, (iv.a, iv.b), rp.label, rp.lam, rp.theta,
                              engine, s, q, None, 0.0, 0.0, 0.0, 0.0, False,
                              skipped=True, reason=reason)


class _MeanCache:
    def __init__(self, cfg):
        self.cfg = cfg
        self._store = {}

    def get(self, fn, iv):
        key = (fn.label, iv.a, iv.b)
        if key not in self._store:
            self._store[key] = mean_integral(fn.f, iv, self.cfg)
        return self._store[key]


def _claim_for(fn, engine, s, q):
    sense = CONCAVE if engine in ("concave", "ostrowski_concave") else CONVEX
    return fn.find_claim(s, q, sense)


def verify_case(fn, iv, rp, engine, s, q, cfg=None, *, x=None, cache=None):
    """Check one bound against the oracle deviation.

    ``x`` is the Ostrowski point (only for the ``ostrowski_*`` engines and
    ``classic_ostrowski``); ``q`` may be an :class:`ExponentPair`.
    """
    q = getattr(q, "q", q)
    cfg = cfg or OracleConfig.from_env()
    cache = cache or _MeanCache(cfg)
    p = q / (q - 1.0) if q > 1.0 else None
    cid = case_id(fn.label, iv.a, iv.b, rp.lam, rp.theta, engine, s, q)
    if not fn.admits(iv.a, iv.b):
        return _skipped(cid, fn, iv, rp, engine, s, q, "interval outside derivative domain")
    if engine != "classic_ostrowski":
        claim = _claim_for(fn, engine, s, q)
        if claim is None:
            return _skipped(cid, fn, iv, rp, engine, s, q,
                            f"no claim backs {engine} at s={s}, q={q}")
        base = engine.replace("ostrowski_pm", "power_mean").replace("ostrowski_", "")
        if base not in admissible_engines(claim):
            return _skipped(cid, fn, iv, rp, engine, s, q,
                            f"claim {claim} does not admit {engine}")
    mean = cache.get(fn, iv)
    dev, err = deviation(fn.f, iv, rp, mean=mean)
    lhs = abs(dev)
    detail = {}
    try:
        if engine in ("power_mean", "holder", "concave"):
            dd = DerivData.from_derivative(fn.fp, iv, rp)
            res = run_engine(engine, dd, iv, rp, s, q)
            rhs = res.value
            detail = {k: v for k, v in res.terms.items() if k in ("left", "right")}
        else:
            if x is None or rp.theta != 1.0:
                raise ParameterError("Ostrowski engines need theta = 1 and a point x")
            M = fn.deriv_sup(iv.a, iv.b)
            detail = {"x": x, "M": M}
            if engine == "ostrowski_pm":
                rhs = ostrowski_bound(M, x, iv, s, q, "power_mean")
            elif engine == "ostrowski_holder":
                rhs = ostrowski_bound(M, x, iv, s, q, "holder")
            elif engine == "ostrowski_concave":
                rhs = ostrowski_bound(None, x, iv, s, q, "concave_point_values",
                                      d_left_mid=abs(fn.fp((x + iv.a) / 2.0)),
                                      d_right_mid=abs(fn.fp((x + iv.b) / 2.0)))
            elif engine == "classic_ostrowski":
                rhs = classic_ostrowski(M, x, iv)
            else:
                raise ParameterError(f"unknown engine {engine!r}")
    except ParameterError as exc:
        return _skipped(cid, fn, iv, rp, engine, s, q, str(exc))
    return _record(cid, fn, iv, rp, engine, s, q, p, lhs, rhs, err, detail)


def hadamard_check(fn, iv, s, cfg=None, *, sense=None, cache=None):
    """Two-sided s-convex Hadamard bracket for ``fn`` itself.

    Convex: ``2**(s-1) f(mid) <= mean <= (f(a) + f(b)) / (s+1)``; both
    directions flip for a concave claim.  The record's lhs/rhs carry the
    side with the smaller slack.
    """
    cfg = cfg or OracleConfig.from_env()
    cache = cache or _MeanCache(cfg)
    rp = RuleParams(0.5, 0.0, "hadamard")
    senses = (sense,) if sense else (CONVEX, CONCAVE)
    claim = None
    for sn in senses:
        claim = fn.find_claim(s, 1.0, sn, target="f")
        if claim:
            break
    cid = case_id(fn.label, iv.a, iv.b, "hadamard", s, claim.sense if claim else sense)
    if claim is None:
        return _skipped(cid, fn, iv, rp, "hadamard", s, 1.0,
                        f"no claim that f is s-{sense or 'convex/concave'} at s={s}")
    lo, hi = fn.domain
    if not lo <= iv.a < iv.b <= hi:
        return _skipped(cid, fn, iv, rp, "hadamard", s, 1.0, "interval outside domain")
    mean, err = cache.get(fn, iv)
    mid_term = 2.0 ** (s - 1.0) * fn.f((iv.a + iv.b) / 2.0)
    end_term = (fn.f(iv.a) + fn.f(iv.b)) / (s + 1.0)
    if claim.sense == CONVEX:
        sides = {"lower": (mid_term, mean), "upper": (mean, end_term)}
    else:
        sides = {"lower": (mean, mid_term), "upper": (end_term, mean)}
    binding = min(sides, key=lambda k: sides[k][1] - sides[k][0])
    lhs, rhs = sides[binding]
    detail = {"sense": claim.sense, "binding": binding,
              "mid_term": mid_term, "mean": mean, "end_term": end_term,
              "lower_slack": sides["lower"][1] - sides["lower"][0],
              "upper_slack": sides["upper"][1] - sides["upper"][0]}
    return _record(cid, fn, iv, rp, "hadamard", s, 1.0, None, lhs, rhs, err, detail)


def default_rules():
    rules = [RuleSpec("midpoint", lam=0.5, theta=1.0),
             RuleSpec("trapezoid", lam=0.5, theta=0.0),
             RuleSpec("simpson", lam=0.5, theta=2.0 / 3.0)]
    for lam in (0.0, 0.25, 0.75, 1.0):
        rules.append(RuleSpec(gen_midpoint(lam).name, lam=lam, theta=1.0))
        rules.append(RuleSpec(gen_trapezoid(lam).name, lam=lam, theta=0.0))
    for frac in (0.1, 0.3, 0.6, 0.9):
        rules.append(RuleSpec(f"ostrowski({frac:g})", kind="ostrowski", value=frac))
    seen = {(r.lam, r.theta) for r in rules if r.kind == "fixed"}
    grid = (0.0, 0.25, 0.5, 2.0 / 3.0, 0.75, 1.0)
    for lam in grid:
        for theta in grid:
            if (lam, theta) not in seen:
                rules.append(RuleSpec(f"grid({lam:.4g},{theta:.4g})", lam=lam, theta=theta))
    return tuple(rules)


DEFAULT_INTERVALS = ((0.0, 1.0), (0.25, 0.75), (0.5, 2.0), (1.0, 3.5))


def default_grid():
    return SuiteGrid(builtin_catalog(), DEFAULT_INTERVALS, default_rules())


def _cases(grid):
    qs = tuple(grid.q_grid)
    for fn in grid.functions:
        for a, b in grid.intervals:
            iv = Interval(a, b)
            if not fn.admits(a, b):
                continue
            for spec in grid.rules:
                rp, x = spec.resolve(iv)
                for claim in fn.deriv_claims():
                    if not any(math.isclose(claim.q, q) for q in qs):
                        continue
                    for engine in admissible_engines(claim):
                        if engine in grid.engines:
                            yield fn, iv, rp, engine, claim.s, claim.q, x
                        ost = {"power_mean": "ostrowski_pm", "holder": "ostrowski_holder",
                               "concave": "ostrowski_concave"}[engine]
                        if x is not None and ost in grid.engines:
                            yield fn, iv, rp, ost, claim.s, claim.q, x
                if x is not None and "classic_ostrowski" in grid.engines:
                    yield fn, iv, rp, "classic_ostrowski", 1.0, 1.0, x


def run_suite(grid=None, cfg=None):
    """Run every admissible case of ``grid``; records come back in case_id order."""
    grid = grid or default_grid()
    cfg = cfg or OracleConfig.from_env()
    validate_catalog(grid.functions)
    for fn in grid.functions:
        if not fn.deriv_claims():
            raise ConfigurationError(f"{fn.label} carries no derivative claims")
    cache = _MeanCache(cfg)
    records = {}
    for fn, iv, rp, engine, s, q, x in _cases(grid):
        rec = verify_case(fn, iv, rp, engine, s, q, cfg, x=x, cache=cache)
        records[rec.case_id] = rec
    if grid.hadamard:
        for fn in grid.functions:
            for a, b in grid.intervals:
                for claim in fn.self_claims():
                    lo, hi = fn.domain
                    if lo <= a < b <= hi:
                        rec = hadamard_check(fn, Interval(a, b), claim.s, cfg,
                                             sense=claim.sense, cache=cache)
                        records[rec.case_id] = rec
    ordered = [records[k] for k in sorted(records)]
    config = {"oracle": asdict(cfg), "grid": grid.echo(), "slack_tol": SLACK_TOL,
              "version": __version__}
    return SuiteReport(ordered, config)


def tightness_scan(grid=None, cfg=None):
    """Same cases as :func:`run_suite`, sorted by descending lhs/rhs."""
    rep = run_suite(grid, cfg)
    active = [r for r in rep.records if not r.skipped]
    active.sort(key=lambda r: (-r.ratio, r.case_id))
    skipped = [r for r in rep.records if r.skipped]
    return SuiteReport(active + skipped, rep.config)
