"""Adaptive Gauss-Kronrod (7/15) integration used as the reference oracle.

The 7-point Gauss rule is embedded in the 15-point Kronrod rule, so each
panel yields a value and an error estimate from the same 15 evaluations.
Panels are refined globally, largest error first.  Neither rule touches the
panel endpoints, which lets integrable endpoint singularities such as
``t**-0.5`` be handled by repeated halving toward the endpoint.
"""

import heapq
import math
import os
from dataclasses import dataclass

from .errors import ConvergenceError, DomainError

# (node, Kronrod weight, Gauss weight); Gauss weight 0 for Kronrod-only nodes
_XGK = (
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
)
_WGK = (
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
)
_WG = (
    0.0,
    0.129484966168869693270611432679082,
    0.0,
    0.279705391489276667901467771423780,
    0.0,
    0.381830050505118944950369775488975,
    0.0,
    0.417959183673469387755102040816327,
)

_EPS = 2.220446049250313e-16


@dataclass(frozen=True)
class OracleConfig:
    rel_tol: float = 1e-12
    abs_tol: float = 1e-14
    max_depth: int = 40
    rule: str = "gauss-kronrod-7-15"

    def __post_init__(self):
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise DomainError("oracle tolerances must be positive")
        if self.max_depth < 1:
            raise DomainError("max_depth must be >= 1")

    @classmethod
    def from_env(cls, **overrides):
        """Default config, with ``SQUADB_ORACLE_TOL`` overriding ``rel_tol``."""
        env = os.environ.get("SQUADB_ORACLE_TOL")
        if env and "rel_tol" not in overrides:
            overrides["rel_tol"] = float(env)
        return cls(**overrides)


def gk15(f, a, b):
    """Single-panel Kronrod value and ``|K15 - G7|``."""
    c = 0.5 * (a + b)
    h = 0.5 * (b - a)
    fc = f(c)
    k = _WGK[7] * fc
    g = _WG[7] * fc
    for j in range(7):
        dx = h * _XGK[j]
        pair = f(c - dx) + f(c + dx)
        k += _WGK[j] * pair
        g += _WG[j] * pair
    k *= h
    g *= h
    return k, abs(k - g)


def integrate(f, a, b, cfg=None):
    """Integrate ``f`` over ``[a, b]``; returns ``(value, err_estimate)``.

    Raises :class:`ConvergenceError` (carrying the partial estimate) when a
    panel would have to be split beyond ``cfg.max_depth`` halvings.
    """
    if cfg is None:
        cfg = OracleConfig()
    a = float(a)
    b = float(b)
    if not a < b:
        raise DomainError(f"integration needs a < b, got [{a}, {b}]")

    value, err = gk15(f, a, b)
    _check_finite(value, a, b)
    # heap entries: (-err, seq, lo, hi, value, err, depth); seq keeps ties stable
    heap = [(-err, 0, a, b, value, err, 0)]
    seq = 1
    total = value
    total_err = err
    total_abs = abs(value)
    while True:
        target = max(cfg.abs_tol, cfg.rel_tol * abs(total))
        # below this, further splitting only reshuffles rounding error
        floor = 50.0 * _EPS * total_abs
        if total_err <= max(target, floor):
            return total, total_err
        _, _, lo, hi, v, e, depth = heapq.heappop(heap)
        if depth >= cfg.max_depth:
            raise ConvergenceError(
                f"max_depth {cfg.max_depth} exceeded near [{lo:.6g}, {hi:.6g}]",
                total, total_err)
        mid = 0.5 * (lo + hi)
        v1, e1 = gk15(f, lo, mid)
        v2, e2 = gk15(f, mid, hi)
        _check_finite(v1 + v2, lo, hi)
        heapq.heappush(heap, (-e1, seq, lo, mid, v1, e1, depth + 1))
        heapq.heappush(heap, (-e2, seq + 1, mid, hi, v2, e2, depth + 1))
        seq += 2
        if seq % 128 == 1:
            # resum to stop drift in the running totals
            total = math.fsum(item[4] for item in heap)
            total_err = math.fsum(item[5] for item in heap)
            total_abs = math.fsum(abs(item[4]) for item in heap)
        else:
            total += v1 + v2 - v
            total_err += e1 + e2 - e
            total_abs += abs(v1) + abs(v2) - abs(v)


def _check_finite(v, a, b):
    if not math.isfinite(v):
        raise DomainError(f"integrand is not finite on [{a}, {b}]")


def integrate_split(f, a, b, breaks=(), cfg=None):
    """Integrate piecewise over ``[a, b]`` split at interior ``breaks``."""
    pts = [a] + sorted(x for x in breaks if a < x < b) + [b]
    value = 0.0
    err = 0.0
    for lo, hi in zip(pts, pts[1:]):
        v, e = integrate(f, lo, hi, cfg)
        value += v
        err += e
    return value, err
