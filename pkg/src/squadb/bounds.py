"""Bound engines for the deviation of the (lambda, theta) functional.

Three engines, all fed with derivative *values* rather than functions:

``power_mean``
    ``|f'|**q`` s-convex, ``q >= 1``; kernel moments ``a1``, ``a2``, ``a3``.
``holder``
    ``|f'|**q`` s-convex, ``q > 1`` with conjugate ``p``.
``concave``
    ``|f'|**q`` s-concave, ``q > 1``; uses ``|f'|`` at the midpoints of
    ``[a, C]`` and ``[C, b]``.

The Ostrowski variants fix ``theta = 1`` and put the free point ``x`` at the
node; ``best_bound`` sweeps engines and exponents backed by claims.
"""

import math
from dataclasses import dataclass, field

from . import kernels
from .catalog import CONCAVE, CONVEX
from .errors import ConfigurationError, DomainError, ParameterError

ENGINES = ("power_mean", "holder", "concave")
ENGINE_ORDER = {name: i for i, name in enumerate(ENGINES)}
CONJUGACY_TOL = 1e-12


@dataclass(frozen=True)
class ExponentPair:
    q: float
    p: float = None

    @classmethod
    def conjugate(cls, q):
        if not q > 1.0:
            raise ParameterError(f"conjugate exponents need q > 1, got {q}")
        return cls(q, q / (q - 1.0))

    def require_conjugate(self):
        if self.p is None:
            raise ParameterError("engine needs a conjugate exponent p")
        if not (self.q > 1.0 and self.p > 1.0):
            raise ParameterError(f"need p, q > 1, got p={self.p}, q={self.q}")
        if abs(1.0 / self.p + 1.0 / self.q - 1.0) > CONJUGACY_TOL:
            raise ParameterError(f"1/p + 1/q != 1 for p={self.p}, q={self.q}")


@dataclass(frozen=True)
class DerivData:
    d_a: float
    d_b: float
    d_c: float
    d_left_mid: float = 0.0
    d_right_mid: float = 0.0
    M: float = None

    def __post_init__(self):
        for name in ("d_a", "d_b", "d_c", "d_left_mid", "d_right_mid", "M"):
            v = getattr(self, name)
            if v is None:
                continue
            if not (math.isfinite(v) and v >= 0.0):
                raise ParameterError(f"{name} must be finite and >= 0, got {v}")

    @classmethod
    def from_derivative(cls, fprime, iv, rp, M=None):
        lam = rp.lam
        c = rp.node(iv)
        return cls(
            abs(float(fprime(iv.a))),
            abs(float(fprime(iv.b))),
            abs(float(fprime(c))),
            abs(float(fprime(((2.0 - lam) * iv.a + lam * iv.b) / 2.0))),
            abs(float(fprime(((1.0 - lam) * iv.a + (1.0 + lam) * iv.b) / 2.0))),
            M,
        )

    @classmethod
    def uniform(cls, M):
        return cls(M, M, M, M, M, M)


@dataclass(frozen=True)
class BoundResult:
    value: float
    engine: str
    terms: dict
    params: dict = field(default_factory=dict)

    def as_dict(self):
        return {"value": self.value, "engine": self.engine,
                "terms": dict(self.terms), "params": dict(self.params)}


def _check_common(iv, rp, s):
    if not 0.0 < s <= 1.0:
        raise ParameterError(f"s must lie in (0, 1], got {s}")
    if iv.a < 0.0:
        raise ParameterError(f"interval must lie in [0, inf), got a = {iv.a}")


def _echo(iv, rp, s, q, p=None):
    out = {"a": iv.a, "b": iv.b, "lambda": rp.lam, "theta": rp.theta, "s": s, "q": q}
    if p is not None:
        out["p"] = p
    return out


def bound_power_mean(dd, iv, rp, s, q):
    _check_common(iv, rp, s)
    if not q >= 1.0:
        raise ParameterError(f"power-mean engine needs q >= 1, got {q}")
    th = rp.theta
    A1 = kernels.a1(th)
    A2 = kernels.a2(th, s)
    A3 = kernels.a3(th, s)
    # q = 1: the a1 factor is a1**0 = 1 by convention
    pref = 1.0 if q == 1.0 else A1 ** (1.0 - 1.0 / q)
    inner_left = (dd.d_a ** q * A2 + dd.d_c ** q * A3) ** (1.0 / q)
    inner_right = (dd.d_b ** q * A2 + dd.d_c ** q * A3) ** (1.0 / q)
    left = iv.width * pref * rp.lam ** 2 * inner_left
    right = iv.width * pref * (1.0 - rp.lam) ** 2 * inner_right
    terms = {"left": left, "right": right, "a1": A1, "a2": A2, "a3": A3,
             "kernel_factor": pref}
    return BoundResult(left + right, "power_mean", terms, _echo(iv, rp, s, q))


def bound_holder(dd, iv, rp, s, pq):
    _check_common(iv, rp, s)
    pq.require_conjugate()
    q, p = pq.q, pq.p
    kf = kernels.holder_kernel(rp.theta, p) ** (1.0 / p)
    left = iv.width * kf * rp.lam ** 2 * ((dd.d_a ** q + dd.d_c ** q) / (s + 1.0)) ** (1.0 / q)
    right = iv.width * kf * (1.0 - rp.lam) ** 2 * (
        (dd.d_b ** q + dd.d_c ** q) / (s + 1.0)) ** (1.0 / q)
    terms = {"left": left, "right": right, "kernel_factor": kf}
    return BoundResult(left + right, "holder", terms, _echo(iv, rp, s, q, p))


def bound_concave(dd, iv, rp, s, pq):
    _check_common(iv, rp, s)
    pq.require_conjugate()
    q, p = pq.q, pq.p
    kf = kernels.holder_kernel(rp.theta, p) ** (1.0 / p)
    sf = 0.5 ** ((1.0 - s) / q)
    left = iv.width * sf * kf * rp.lam ** 2 * dd.d_left_mid
    right = iv.width * sf * kf * (1.0 - rp.lam) ** 2 * dd.d_right_mid
    terms = {"left": left, "right": right, "kernel_factor": kf, "s_factor": sf}
    return BoundResult(left + right, "concave", terms, _echo(iv, rp, s, q, p))


def run_engine(engine, dd, iv, rp, s, q):
    """Dispatch by engine name; conjugate ``p`` is derived from ``q``."""
    if engine == "power_mean":
        return bound_power_mean(dd, iv, rp, s, q)
    if engine == "holder":
        return bound_holder(dd, iv, rp, s, ExponentPair.conjugate(q))
    if engine == "concave":
        return bound_concave(dd, iv, rp, s, ExponentPair.conjugate(q))
    raise ParameterError(f"unknown engine {engine!r}")


def ostrowski_bound(M, x, iv, s, q, variant="power_mean", *, p=None,
                    d_left_mid=None, d_right_mid=None):
    """Ostrowski-type bound on ``|f(x) - mean|``.

    ``power_mean`` and ``holder`` use a sup bound ``M`` on ``|f'|``; the
    ``concave_point_values`` variant uses ``|f'((x+a)/2)|`` and
    ``|f'((x+b)/2)|`` instead (``M`` is ignored).
    """
    if not iv.a <= x <= iv.b:
        raise DomainError(f"x = {x} lies outside [{iv.a}, {iv.b}]")
    if not 0.0 < s <= 1.0:
        raise ParameterError(f"s must lie in (0, 1], got {s}")
    w = iv.width
    left_sq = (x - iv.a) ** 2
    right_sq = (iv.b - x) ** 2
    if variant == "power_mean":
        if not q >= 1.0:
            raise ParameterError(f"q must be >= 1, got {q}")
        return M * (2.0 / (s + 1.0)) ** (1.0 / q) * (left_sq + right_sq) / (2.0 * w)
    if p is None:
        p = ExponentPair.conjugate(q).p
    ExponentPair(q, p).require_conjugate()
    if variant == "holder":
        return (M / (p + 1.0) ** (1.0 / p) * (2.0 / (s + 1.0)) ** (1.0 / q)
                * (left_sq + right_sq) / w)
    if variant == "concave_point_values":
        if d_left_mid is None or d_right_mid is None:
            raise ParameterError("concave variant needs d_left_mid and d_right_mid")
        return (2.0 ** ((s - 1.0) / q) / ((p + 1.0) ** (1.0 / p) * w)
                * (left_sq * d_left_mid + right_sq * d_right_mid))
    raise ParameterError(f"unknown Ostrowski variant {variant!r}")


def classic_ostrowski(M, x, iv):
    """The textbook Ostrowski bound ``M/(b-a) ((x-a)**2 + (b-x)**2) / 2``."""
    if not iv.a <= x <= iv.b:
        raise DomainError(f"x = {x} lies outside [{iv.a}, {iv.b}]")
    return M / iv.width * ((x - iv.a) ** 2 + (iv.b - x) ** 2) / 2.0


def admissible_engines(claim):
    if claim.sense == CONVEX:
        return ("power_mean", "holder") if claim.q > 1.0 else ("power_mean",)
    if claim.sense == CONCAVE and claim.q > 1.0:
        return ("concave",)
    return ()


def best_bound(dd, iv, rp, claims, q_grid):
    """Smallest bound over every claim-backed (engine, s, q) on ``q_grid``.

    Ties go to the earlier engine (power_mean, holder, concave), then the
    smaller q.
    """
    if not q_grid:
        raise ConfigurationError("q_grid is empty")
    candidates = []
    for claim in claims:
        if claim.target != "fprime":
            continue
        if not any(math.isclose(claim.q, q, abs_tol=1e-12) for q in q_grid):
            continue
        for engine in admissible_engines(claim):
            res = run_engine(engine, dd, iv, rp, claim.s, claim.q)
            candidates.append(((res.value, ENGINE_ORDER[engine], claim.q, claim.s), res))
    if not candidates:
        raise ConfigurationError("no admissible (engine, s, q) combination")
    candidates.sort(key=lambda item: item[0])
    return candidates[0][1]
