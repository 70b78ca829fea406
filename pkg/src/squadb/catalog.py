"""Test functions with known derivatives and declared s-convexity classes.

A claim ``ConvexityClaim(s, q, sense)`` states that ``|f'|**q`` is s-convex
(or s-concave) in the second sense on the function's derivative domain.
Claims with ``target="f"`` describe ``f`` itself and feed the Hadamard check.

Evaluators are written with numpy ufuncs so the grid checkers can evaluate
whole sample grids at once.
"""

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import ConfigurationError, DomainError

CONVEX = "convex"
CONCAVE = "concave"

DEFAULT_Q_GRID = (1.0, 1.25, 1.5, 2.0, 3.0, 5.0)
CHECK_TOL = 1e-10


@dataclass(frozen=True)
class ConvexityClaim:
    s: float
    q: float
    sense: str
    target: str = "fprime"

    def __post_init__(self):
        if not 0.0 < self.s <= 1.0:
            raise DomainError(f"claim s must lie in (0, 1], got {self.s}")
        if self.q < 1.0:
            raise DomainError(f"claim q must be >= 1, got {self.q}")
        if self.sense not in (CONVEX, CONCAVE):
            raise DomainError(f"unknown sense {self.sense!r}")
        if self.target not in ("fprime", "f"):
            raise DomainError(f"unknown claim target {self.target!r}")


@dataclass(frozen=True)
class TestFunction:
    __test__ = False  # keep pytest from collecting this class

    name: str
    params: tuple
    domain: tuple
    eval: object = field(compare=False, repr=False)
    deriv: object = field(compare=False, repr=False)
    claims: tuple = ()
    deriv_domain: tuple = None
    # |f'| is monotone on deriv_domain, so its sup sits at an endpoint
    deriv_monotone: bool = True

    def __post_init__(self):
        lo, hi = self.domain
        if lo < 0 or not lo < hi:
            raise ConfigurationError(f"{self.name}: bad domain {self.domain}")
        if self.deriv_domain is None:
            object.__setattr__(self, "deriv_domain", self.domain)

    @property
    def label(self):
        if not self.params:
            return self.name
        inner = ",".join(f"{k}={v:g}" for k, v in self.params)
        return f"{self.name}[{inner}]"

    def param(self, key, default=None):
        return dict(self.params).get(key, default)

    def f(self, t):
        return float(self.eval(t))

    def fp(self, t):
        return float(self.deriv(t))

    def abs_deriv_power(self, q):
        deriv = self.deriv
        return lambda t: np.abs(deriv(t)) ** q

    def deriv_claims(self):
        return tuple(c for c in self.claims if c.target == "fprime")

    def self_claims(self):
        return tuple(c for c in self.claims if c.target == "f")

    def find_claim(self, s, q, sense, target="fprime"):
        for c in self.claims:
            if (c.target == target and c.sense == sense
                    and math.isclose(c.s, s, abs_tol=1e-12)
                    and math.isclose(c.q, q, abs_tol=1e-12)):
                return c
        return None

    def admits(self, a, b):
        """True when ``[a, b]`` lies inside the derivative domain."""
        lo, hi = self.deriv_domain
        return lo <= a < b <= hi

    def deriv_sup(self, a, b):
        if not self.deriv_monotone:
            raise ConfigurationError(f"{self.label}: no sup available for |f'|")
        return max(abs(self.fp(a)), abs(self.fp(b)))


@dataclass(frozen=True)
class CheckReport:
    passed: bool
    sense: str
    s: float
    worst_violation: float
    # (x, y, t) of the worst sampled triple
    where: tuple
    n_checked: int


def _grid_eval(g, pts):
    pts = np.asarray(pts, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        try:
            out = np.asarray(g(pts), dtype=float)
        except TypeError:
            out = None
        if out is None or out.shape != pts.shape:
            out = np.asarray([float(g(float(v))) for v in pts.ravel()]).reshape(pts.shape)
    return out


def _check(g, s, domain, grid_n, sense, tol_abs):
    if grid_n < 3:
        raise DomainError("grid_n must be >= 3")
    lo, hi = domain
    if lo < 0 or not lo < hi:
        raise DomainError(f"domain must be within [0, inf) with lo < hi, got {domain}")
    xs = np.linspace(lo, hi, grid_n)
    ts = np.linspace(0.0, 1.0, grid_n)
    gx = _grid_eval(g, xs)
    if not np.all(np.isfinite(gx)):
        raise DomainError("g is not finite on the sample grid")
    X = xs[:, None, None]
    Y = xs[None, :, None]
    T = ts[None, None, :]
    mix = T * X + (1.0 - T) * Y
    g_mix = _grid_eval(g, mix)
    if not np.all(np.isfinite(g_mix)):
        raise DomainError("g is not finite on the sample grid")
    ws = ts ** s
    ws1 = (1.0 - ts) ** s
    rhs = ws[None, None, :] * gx[:, None, None] + ws1[None, None, :] * gx[None, :, None]
    excess = g_mix - rhs if sense == CONVEX else rhs - g_mix
    idx = np.unravel_index(int(np.argmax(excess)), excess.shape)
    worst = float(excess[idx])
    where = (float(xs[idx[0]]), float(xs[idx[1]]), float(ts[idx[2]]))
    return CheckReport(worst <= tol_abs, sense, s, worst, where, excess.size)


def check_s_convex(g, s, domain, grid_n=33, tol_abs=CHECK_TOL):
    """Grid test of ``g(tx + (1-t)y) <= t**s g(x) + (1-t)**s g(y)``."""
    return _check(g, s, domain, grid_n, CONVEX, tol_abs)


def check_s_concave(g, s, domain, grid_n=33, tol_abs=CHECK_TOL):
    """Grid test of the reversed inequality."""
    return _check(g, s, domain, grid_n, CONCAVE, tol_abs)


def check_claim(fn, claim, grid_n=33, tol_abs=CHECK_TOL):
    if claim.target == "f":
        g, dom = fn.eval, fn.domain
    else:
        g, dom = fn.abs_deriv_power(claim.q), fn.deriv_domain
    checker = check_s_convex if claim.sense == CONVEX else check_s_concave
    return checker(g, claim.s, dom, grid_n, tol_abs)


def _claims(sense, s_values, q_values, target="fprime"):
    return tuple(ConvexityClaim(s, q, sense, target)
                 for s in s_values for q in q_values)


def _square():
    return TestFunction(
        "square", (), (0.0, 4.0),
        lambda t: t * t,
        lambda t: 2.0 * t,
        _claims(CONVEX, (0.5, 1.0), DEFAULT_Q_GRID)
        + (ConvexityClaim(1.0, 1.0, CONVEX, "f"),))


def _exp():
    return TestFunction(
        "exp", (), (0.0, 2.0), np.exp, np.exp,
        _claims(CONVEX, (0.5, 1.0), DEFAULT_Q_GRID)
        + (ConvexityClaim(1.0, 1.0, CONVEX, "f"),))


def _three_halves():
    # |f'|**q = t**(q/2): concave for q <= 2, convex for q >= 2, and
    # s-convex for every s <= q/2
    return TestFunction(
        "three_halves", (), (0.0, 4.0),
        lambda t: (2.0 / 3.0) * np.power(t, 1.5),
        np.sqrt,
        _claims(CONCAVE, (1.0,), (1.25, 1.5, 2.0))
        + _claims(CONVEX, (1.0,), (2.0, 3.0, 5.0))
        + _claims(CONVEX, (0.5,), DEFAULT_Q_GRID)
        + (ConvexityClaim(1.0, 1.0, CONVEX, "f"),))


def _quarter_power():
    # |f'|**q = t**(q/4)
    return TestFunction(
        "quarter_power", (), (0.0, 4.0),
        lambda t: 0.8 * np.power(t, 1.25),
        lambda t: np.power(t, 0.25),
        _claims(CONCAVE, (1.0,), (1.25, 1.5, 2.0, 3.0))
        + _claims(CONVEX, (1.0,), (5.0,))
        + _claims(CONVEX, (0.25,), DEFAULT_Q_GRID)
        + _claims(CONVEX, (0.5,), (2.0, 3.0, 5.0))
        + (ConvexityClaim(1.0, 1.0, CONVEX, "f"),))


def power_s_plus_1(s, q_grid=DEFAULT_Q_GRID):
    """``f(t) = t**(s+1)``; claims ``|f'|**q`` s-convex for ``q < 1/s``."""
    qs = tuple(q for q in q_grid if s * q < 1.0)
    return TestFunction(
        "power_s_plus_1", (("s", s),), (0.0, 4.0),
        lambda t: np.power(t, s + 1.0),
        lambda t: (s + 1.0) * np.power(t, s),
        _claims(CONVEX, (s,), qs) + (ConvexityClaim(1.0, 1.0, CONVEX, "f"),))


def hm94(a_p, b_p, c_p, s, q_grid=DEFAULT_Q_GRID):
    """Piecewise ``a_p`` at 0, ``b_p t**s + c_p`` for ``t > 0``.

    The function itself is s-convex when ``b_p >= 0`` and
    ``0 <= c_p <= a_p``.  Its derivative blows up at 0, so derivative
    claims live on ``[0.25, 4]`` where ``|f'|**q`` is convex and decreasing.
    """
    if not (b_p >= 0 and 0 <= c_p <= a_p):
        raise ConfigurationError("hm94 needs b >= 0 and 0 <= c <= a")

    def f(t):
        t = np.asarray(t, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            out = np.where(t > 0, b_p * np.power(t, s) + c_p, a_p)
        return out if out.ndim else float(out)

    def fp(t):
        return b_p * s * np.power(t, s - 1.0)

    claims = _claims(CONVEX, tuple(sorted({s, 1.0})), q_grid)
    claims += (ConvexityClaim(s, 1.0, CONVEX, "f"),)
    if a_p == c_p:
        # continuous at 0: b t**s + c is concave
        claims += (ConvexityClaim(1.0, 1.0, CONCAVE, "f"),)
    return TestFunction(
        "hm94", (("a", a_p), ("b", b_p), ("c", c_p), ("s", s)), (0.0, 4.0),
        f, fp, claims, deriv_domain=(0.25, 4.0))


@lru_cache(maxsize=1)
def builtin_catalog():
    entries = [_square(), _exp(), _three_halves(), _quarter_power()]
    entries += [power_s_plus_1(s) for s in (0.2, 0.4, 0.6, 0.8)]
    entries += [hm94(0.0, 1.0, 0.0, s) for s in (0.3, 0.5, 0.7)]
    entries.append(hm94(1.0, 2.0, 0.5, 0.5))
    return tuple(entries)


def lookup(name, catalog=None, **params):
    """Find a catalog entry by name; ``params`` disambiguate families."""
    catalog = builtin_catalog() if catalog is None else catalog
    hits = [fn for fn in catalog if fn.name == name]
    for key, val in params.items():
        if val is None:
            continue
        narrowed = [fn for fn in hits
                    if fn.param(key) is not None and math.isclose(fn.param(key), val)]
        if narrowed or any(fn.param(key) is not None for fn in hits):
            hits = narrowed
    if not hits:
        raise ConfigurationError(f"no catalog entry {name!r} with {params}")
    return hits[0]


def validate_function(fn, grid_n=33, tol_abs=CHECK_TOL):
    """Check every claim on ``fn``; returns the failing ``(claim, report)`` pairs."""
    bad = []
    for claim in fn.claims:
        rep = check_claim(fn, claim, grid_n, tol_abs)
        if not rep.passed:
            bad.append((claim, rep))
    return bad


def validate_catalog(catalog, grid_n=33, tol_abs=CHECK_TOL):
    """Raise :class:`ConfigurationError` if any claim fails its grid check."""
    problems = []
    for fn in catalog:
        for claim, rep in validate_function(fn, grid_n, tol_abs):
            problems.append(f"{fn.label}: {claim} violated by {rep.worst_violation:.3g} "
                            f"at (x, y, t) = {rep.where}")
    if problems:
        raise ConfigurationError("catalog claim validation failed:\n" + "\n".join(problems))
