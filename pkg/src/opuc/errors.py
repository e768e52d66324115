"""Exception hierarchy.

Every error carries the process exit code the CLI reports for it, so a
failure surfaces as a distinct nonzero status with a one-line message.
"""


class OpucError(Exception):
    exit_code = 5

    def __init__(self, message, operation=None):
        self.operation = operation
        if operation:
            message = f"{operation}: {message}"
        super().__init__(message)


class SpecError(OpucError, ValueError):
    """Malformed measure, coefficient or run specification."""

    exit_code = 2


class NumericalBreakdown(OpucError):
    exit_code = 3


class TrivialMeasure(NumericalBreakdown):
    """The measure is supported on too few points for the requested degree."""


class BoundaryPoint(OpucError, ValueError):
    exit_code = 4


class ResolutionExceeded(OpucError):
    exit_code = 6


class ZeroMass(OpucError, ValueError):
    exit_code = 7


class DegreeMismatch(OpucError, ValueError):
    exit_code = 8


class InvalidAlpha(OpucError, ValueError):
    exit_code = 9


class NotUnimodular(OpucError, ValueError):
    exit_code = 10


class DegenerateF(OpucError):
    exit_code = 11


class SzegoConditionFails(OpucError):
    exit_code = 12


class LogDivergence(OpucError):
    """log w is not integrable on the grid (the weight vanishes at a node)."""

    exit_code = 13


class ZeroWeight(OpucError):
    exit_code = 14


class ExtrapolationUnstable(OpucError):
    exit_code = 15


class ZeroDenominator(OpucError):
    exit_code = 16

    def __init__(self, message, index=None, operation=None):
        self.index = index
        super().__init__(message, operation)


class UnsupportedMeasure(OpucError, ValueError):
    """Operation needs a purely absolutely continuous measure."""

    exit_code = 17
