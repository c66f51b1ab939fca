"""Exception hierarchy shared by every module."""


class LmmseSnrError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(LmmseSnrError, ValueError):
    """Invalid input: bad configuration, out-of-domain argument, bad file."""


class NumericError(LmmseSnrError, ArithmeticError):
    """A numerical procedure failed on otherwise valid input."""


class NotPositiveDefiniteError(NumericError):
    pass


class ConvergenceError(NumericError):
    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class StabilityError(NumericError):
    """t^2 * gamma * gamma_tilde >= 1: the moment denominators vanish."""
