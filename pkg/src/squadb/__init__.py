"""Error bounds for (lambda, theta) quadrature rules under s-convexity of |f'|**q."""

__version__ = "0.1.0"
