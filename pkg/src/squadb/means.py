"""Special means and the two mean inequalities built on the bound engines.

Weighted mean convention: ``mean_weighted(a, b, alpha) = alpha a + (1-alpha) b``.
The inequalities are evaluated by instantiating the functional and the
engines with ``f(t) = t**(s+1)``, so the node is ``C = (1-lam) a + lam b``
exactly as in the functional, whatever the mean notation suggests.
"""

import math

from . import kernels
from .bounds import DerivData, ExponentPair, bound_holder, bound_power_mean
from .errors import DomainError, ParameterError
from .rules import Interval, RuleParams, quad_functional


def mean_weighted(a, b, alpha):
    if not 0.0 <= alpha <= 1.0:
        raise DomainError(f"alpha must lie in [0, 1], got {alpha}")
    return alpha * a + (1.0 - alpha) * b


def mean_arith(a, b):
    return (a + b) / 2.0


def _check_positive_distinct(a, b):
    if not (a > 0.0 and b > 0.0):
        raise DomainError(f"means need a, b > 0, got {a}, {b}")
    if a == b:
        raise DomainError("means need a != b")


def mean_log(a, b):
    _check_positive_distinct(a, b)
    d = math.log(b) - math.log(a)
    if abs(d) < 1e-300:
        raise DomainError("a and b too close: treated as a == b")
    return (b - a) / d


def mean_plog(a, b, p):
    """p-logarithmic mean ``((b**(p+1) - a**(p+1)) / ((p+1)(b-a)))**(1/p)``."""
    _check_positive_distinct(a, b)
    if p in (-1.0, 0.0):
        raise DomainError("p-logarithmic mean undefined for p in {-1, 0}")
    return ((b ** (p + 1.0) - a ** (p + 1.0)) / ((p + 1.0) * (b - a))) ** (1.0 / p)


def _check_prop(a, b, s, q):
    if not 0.0 < a < b:
        raise ParameterError(f"need 0 < a < b, got a={a}, b={b}")
    if not q >= 1.0:
        raise ParameterError(f"need q >= 1, got {q}")
    if not 0.0 < s < 1.0 / q:
        raise ParameterError(f"need 0 < s < 1/q, got s={s}, q={q}")


def _power_setup(a, b, s, lam, theta):
    iv = Interval(a, b)
    rp = RuleParams(lam, theta)
    f = lambda t: t ** (s + 1.0)
    fp = lambda t: (s + 1.0) * t ** s
    return iv, rp, f, fp


def proposition_lhs(a, b, s, lam, theta):
    """``|Q(t**(s+1)) - L_{s+1}**(s+1)(a, b)|`` with the mean in closed form."""
    iv, rp, f, _ = _power_setup(a, b, s, lam, theta)
    return abs(quad_functional(f, iv, rp) - mean_plog(a, b, s + 1.0) ** (s + 1.0))


def proposition1_gap(a, b, s, q, lam, theta):
    """Power-mean inequality for ``t**(s+1)``; returns ``(lhs, rhs)``."""
    _check_prop(a, b, s, q)
    iv, rp, _, fp = _power_setup(a, b, s, lam, theta)
    rhs = bound_power_mean(DerivData.from_derivative(fp, iv, rp), iv, rp, s, q).value
    return proposition_lhs(a, b, s, lam, theta), rhs


def proposition2_gap(a, b, s, pq, lam, theta):
    """Hölder inequality for ``t**(s+1)``; returns ``(lhs, rhs)``."""
    if isinstance(pq, (int, float)):
        pq = ExponentPair.conjugate(float(pq))
    pq.require_conjugate()
    _check_prop(a, b, s, pq.q)
    iv, rp, _, fp = _power_setup(a, b, s, lam, theta)
    rhs = bound_holder(DerivData.from_derivative(fp, iv, rp), iv, rp, s, pq).value
    return proposition_lhs(a, b, s, lam, theta), rhs


def proposition1_rhs_transcribed(a, b, s, q, lam, theta):
    """Right side written directly in terms of powers of a, b and the node."""
    c = (1.0 - lam) * a + lam * b
    A1 = kernels.a1(theta)
    A2 = kernels.a2(theta, s)
    A3 = kernels.a3(theta, s)
    pref = 1.0 if q == 1.0 else A1 ** (1.0 - 1.0 / q)
    return (b - a) * pref * (s + 1.0) * (
        lam ** 2 * (a ** (s * q) * A2 + c ** (s * q) * A3) ** (1.0 / q)
        + (1.0 - lam) ** 2 * (b ** (s * q) * A2 + c ** (s * q) * A3) ** (1.0 / q))


def proposition2_rhs_transcribed(a, b, s, pq, lam, theta):
    q, p = pq.q, pq.p
    c = (1.0 - lam) * a + lam * b
    kf = ((theta ** (p + 1.0) + (1.0 - theta) ** (p + 1.0)) / (p + 1.0)) ** (1.0 / p)
    return (b - a) * kf * (s + 1.0) ** (1.0 - 1.0 / q) * (
        lam ** 2 * (a ** (s * q) + c ** (s * q)) ** (1.0 / q)
        + (1.0 - lam) ** 2 * (b ** (s * q) + c ** (s * q)) ** (1.0 / q))


PROP_A = (0.5, 1.0, 2.0)
PROP_WIDTHS = (0.5, 2.0)
PROP_S = (0.2, 0.4)
PROP_Q = (2.0, 3.0)
PROP_LT = (0.0, 0.25, 0.5, 0.75, 1.0)


def proposition_table():
    """Rows over the standard grid (only ``s < 1/q`` combinations)."""
    rows = []
    for a in PROP_A:
        for w in PROP_WIDTHS:
            b = a + w
            for s in PROP_S:
                for q in PROP_Q:
                    if not s * q < 1.0:
                        continue
                    pq = ExponentPair.conjugate(q)
                    for lam in PROP_LT:
                        for theta in PROP_LT:
                            l1, r1 = proposition1_gap(a, b, s, q, lam, theta)
                            _, r2 = proposition2_gap(a, b, s, pq, lam, theta)
                            rows.append({"a": a, "b": b, "s": s, "q": q, "lambda": lam,
                                         "theta": theta, "lhs": l1, "rhs_prop1": r1,
                                         "rhs_prop2": r2})
    return rows
