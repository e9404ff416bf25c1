"""Exception hierarchy shared by every module."""


class HSTLabError(Exception):
    """Base class for all errors raised by the package."""

    exit_code = 1


class InvalidParameterError(HSTLabError, ValueError):
    exit_code = 2


class InvalidCountError(InvalidParameterError):
    """Antenna count is not admissible for the requested strategy."""


class ConstraintViolation(HSTLabError):
    exit_code = 3


class SpacingViolationError(ConstraintViolation):
    """Antenna placement breaks the half-wavelength or group-overlap rule."""


class RegimeError(ConstraintViolation):
    """A closed-form expression was requested outside its region of validity."""


class EmptySweepError(ConstraintViolation):
    """Every combination of a sweep was skipped."""


class ConvergenceError(HSTLabError, RuntimeError):
    """Iterative refinement hit its cap; ``estimates`` holds the last two values."""

    exit_code = 4

    def __init__(self, message, estimates=()):
        super().__init__(message)
        self.estimates = tuple(estimates)
