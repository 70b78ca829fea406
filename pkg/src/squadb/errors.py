"""Exception hierarchy shared across the package."""


class SquadbError(Exception):
    """Base class for every error raised by squadb."""


class DomainError(SquadbError, ValueError):
    """An argument lies outside the domain of a formula."""


class ParameterError(SquadbError, ValueError):
    """Engine preconditions (exponents, class claims, interval) are violated."""


class ConfigurationError(SquadbError):
    """The catalog or a suite grid is inconsistent."""


class ConvergenceError(SquadbError):
    """Adaptive integration hit its depth limit.

    The partial estimate is kept on the exception so callers can still
    report it.
    """

    def __init__(self, message, value, err_estimate):
        super().__init__(message)
        self.value = value
        self.err_estimate = err_estimate
