"""The (lambda, theta) quadrature functional and its exact deviation identity.

For an interval [a, b] and node ``C = (1 - lam) a + lam b`` the functional is

    Q = (1 - theta) (lam f(a) + (1 - lam) f(b)) + theta f(C)

and its deviation from the mean integral equals

    (b - a) [ -lam**2   int_0^1 (t - theta) f'(t a + (1 - t) C) dt
              + (1 - lam)**2 int_0^1 (t - theta) f'(t b + (1 - t) C) dt ].

The same formula covers lam in {0, 1}; one of the two terms simply vanishes.
"""

import math
from dataclasses import dataclass

from .errors import DomainError
from .oracle import OracleConfig, integrate


@dataclass(frozen=True)
class Interval:
    a: float
    b: float

    def __post_init__(self):
        if not self.a < self.b:
            raise DomainError(f"interval needs a < b, got [{self.a}, {self.b}]")

    @property
    def width(self):
        return self.b - self.a


@dataclass(frozen=True)
class RuleParams:
    lam: float
    theta: float
    name: str = ""

    def __post_init__(self):
        for label, v in (("lambda", self.lam), ("theta", self.theta)):
            if not 0.0 <= v <= 1.0:
                raise DomainError(f"{label} must lie in [0, 1], got {v!r}")

    def node(self, iv):
        return (1.0 - self.lam) * iv.a + self.lam * iv.b

    @property
    def label(self):
        return self.name or f"lam={self.lam:g},theta={self.theta:g}"


def midpoint():
    return RuleParams(0.5, 1.0, "midpoint")


def trapezoid():
    return RuleParams(0.5, 0.0, "trapezoid")


def simpson():
    return RuleParams(0.5, 2.0 / 3.0, "simpson")


def gen_midpoint(lam):
    return RuleParams(lam, 1.0, f"gen_midpoint({lam:g})")


def gen_trapezoid(lam):
    return RuleParams(lam, 0.0, f"gen_trapezoid({lam:g})")


def ostrowski(x, iv):
    if not iv.a <= x <= iv.b:
        raise DomainError(f"x = {x} lies outside [{iv.a}, {iv.b}]")
    lam_x = (x - iv.a) / iv.width
    return RuleParams(lam_x, 1.0, f"ostrowski({x:g})")


PRESETS = {
    "midpoint": midpoint,
    "trapezoid": trapezoid,
    "simpson": simpson,
}


def _finite(v, where):
    v = float(v)
    if not math.isfinite(v):
        raise DomainError(f"non-finite function value at {where}")
    return v


def quad_functional(f, iv, rp):
    c = rp.node(iv)
    fa = _finite(f(iv.a), iv.a)
    fb = _finite(f(iv.b), iv.b)
    fc = _finite(f(c), c)
    return (1.0 - rp.theta) * (rp.lam * fa + (1.0 - rp.lam) * fb) + rp.theta * fc


def mean_integral(f, iv, cfg=None):
    """``(1/(b-a)) int_a^b f`` with its oracle error estimate."""
    v, e = integrate(f, iv.a, iv.b, cfg)
    return v / iv.width, e / iv.width


def deviation(f, iv, rp, cfg=None, *, mean=None):
    """Functional minus the mean integral; returns ``(value, err_estimate)``.

    ``mean`` may carry a precomputed ``(mean, err)`` pair to skip the oracle.
    """
    m, e = mean if mean is not None else mean_integral(f, iv, cfg)
    return quad_functional(f, iv, rp) - m, e


def identity_rhs(fprime, iv, rp, cfg=None):
    """Right side of the deviation identity; returns ``(value, err_estimate)``."""
    c = rp.node(iv)
    th = rp.theta
    left_w = rp.lam ** 2
    right_w = (1.0 - rp.lam) ** 2
    vl, el = integrate(lambda t: (t - th) * float(fprime(t * iv.a + (1.0 - t) * c)),
                       0.0, 1.0, cfg)
    vr, er = integrate(lambda t: (t - th) * float(fprime(t * iv.b + (1.0 - t) * c)),
                       0.0, 1.0, cfg)
    total = -left_w * vl + right_w * vr
    err = left_w * el + right_w * er
    return iv.width * total, iv.width * err


def default_oracle():
    return OracleConfig.from_env()
