"""Exception types shared across the package."""


class HankelMuError(Exception):
    """Base class for all package errors."""


class SpecError(HankelMuError, ValueError):
    """A measure/family/config spec string could not be parsed.

    The message always names the offending token.
    """

    def __init__(self, message, token=None):
        super().__init__(message)
        self.token = token


class QuadratureError(HankelMuError, ArithmeticError):
    """Quadrature did not reach the requested tolerance.

    Carries the last estimate and its error bound so callers can decide
    whether the value is still usable.
    """

    def __init__(self, message, estimate=None, bound=None):
        super().__init__(message)
        self.estimate = estimate
        self.bound = bound


class ConvergenceError(HankelMuError, ArithmeticError):
    """An iterative method exhausted its budget."""

    def __init__(self, message, estimate=None):
        super().__init__(message)
        self.estimate = estimate
