"""Closed-form kernel coefficients of the bound engines.

Every coefficient is a moment of the kink kernel ``|t - theta|`` on [0, 1]:

* ``a1(theta)``            = int |t - theta| dt
* ``a2(theta, s)``         = int |t - theta| t**s dt
* ``a3(theta, s)``         = int |t - theta| (1 - t)**s dt
* ``holder_kernel(theta, p)`` = int |t - theta|**p dt

The ``*_integrand`` helpers return the integrands so tests and the harness
can cross-check the closed forms against a quadrature oracle.
"""

import math

from .errors import DomainError


def _check_theta(theta):
    if not (0.0 <= theta <= 1.0) or math.isnan(theta):
        raise DomainError(f"theta must lie in [0, 1], got {theta!r}")


def _check_s(s):
    if not (0.0 < s <= 1.0):
        raise DomainError(f"s must lie in (0, 1], got {s!r}")


def _pow(x, e):
    # continuous extension 0**e = 0 for e > 0
    return 0.0 if x == 0.0 else x ** e


def a1(theta):
    _check_theta(theta)
    return theta * theta - theta + 0.5


def a2(theta, s):
    _check_theta(theta)
    _check_s(s)
    return (2.0 * _pow(theta, s + 2.0) / ((s + 1.0) * (s + 2.0))
            - theta / (s + 1.0) + 1.0 / (s + 2.0))


def a3(theta, s):
    _check_theta(theta)
    _check_s(s)
    u = 1.0 - theta
    return (2.0 * _pow(u, s + 2.0) / ((s + 1.0) * (s + 2.0))
            - u / (s + 1.0) + 1.0 / (s + 2.0))


def a2_simpson(s):
    """``a2(2/3, s)`` in the form specialised to Simpson's node."""
    _check_s(s)
    return ((2.0 ** (s + 3.0) + 3.0 ** (s + 1.0) * (s - 1.0))
            / (3.0 ** (s + 2.0) * (s + 1.0) * (s + 2.0)))


def a3_simpson(s):
    """``a3(2/3, s)`` in the form specialised to Simpson's node."""
    _check_s(s)
    return ((2.0 + 3.0 ** (s + 1.0) * (2.0 * s + 1.0))
            / (3.0 ** (s + 2.0) * (s + 1.0) * (s + 2.0)))


def holder_kernel(theta, p):
    """``(theta**(p+1) + (1-theta)**(p+1)) / (p+1)``; ``p >= 1`` accepted."""
    _check_theta(theta)
    if not p >= 1.0:
        raise DomainError(f"p must be >= 1, got {p!r}")
    return (_pow(theta, p + 1.0) + _pow(1.0 - theta, p + 1.0)) / (p + 1.0)


def a1_integrand(theta):
    return lambda t: abs(t - theta)


def a2_integrand(theta, s):
    return lambda t: abs(t - theta) * t ** s


def a3_integrand(theta, s):
    return lambda t: abs(t - theta) * (1.0 - t) ** s


def holder_integrand(theta, p):
    return lambda t: abs(t - theta) ** p
