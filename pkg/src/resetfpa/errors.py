"""Exception types shared across the package."""


class ResetFpaError(Exception):
    """Base class for all package errors."""


class NonPositiveResetPoint(ResetFpaError, ValueError):
    """The reset position x_R must be strictly positive."""


class NegativeRate(ResetFpaError, ValueError):
    """The reset rate r must be nonnegative."""


class NonFinite(ResetFpaError, ValueError):
    """An input was NaN or infinite."""


class NoResetLimit(ResetFpaError, ValueError):
    """The requested quantity has no finite r = 0 value.

    The message names the correct limit (e.g. E[tau] = +inf for mu = 0).
    """


class PositiveDriftNoReset(ResetFpaError, ValueError):
    """Without resetting, positive drift makes hitting zero uncertain;
    the maximum-displacement distribution is defective and rejected."""


class DegenerateVariance(ResetFpaError, ArithmeticError):
    """A variance underflowed to <= 0, so a correlation cannot be formed."""


class RangeOverflow(ResetFpaError, OverflowError):
    """An exponent exceeded the safe range for double precision (~700)."""


class SingularCoupling(ResetFpaError, ArithmeticError):
    """The reset-coupling fixed point 1 - u_b(x_R) is numerically zero."""


class IllConditioned(ResetFpaError, ArithmeticError):
    """The tridiagonal solve hit a zero pivot."""


class FarFieldMissing(ResetFpaError, ValueError):
    """No far-field closure is defined for the requested equation class."""


class ContourFailure(ResetFpaError, ArithmeticError):
    """The Talbot contour sum lost all significant digits.

    Carries the achieved-digit estimate in ``digits``.
    """

    def __init__(self, message, digits=None):
        super().__init__(message)
        self.digits = digits


class HorizonExceeded(ResetFpaError, RuntimeError):
    """A simulated path outlived the safety horizon."""


class FunctionalUnavailable(ResetFpaError, ValueError):
    """The requested functional is not defined for this sample batch."""


class EmptySample(ResetFpaError, ValueError):
    """An empty sample array was passed where data is required."""
