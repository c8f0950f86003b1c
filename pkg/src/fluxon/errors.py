"""Exception hierarchy.

Domain errors (bad inputs, violated preconditions) and numeric errors
(solver or accuracy failures) are kept apart because the command line
maps them to different exit codes.
"""


class FluxonError(Exception):
    """Base class for every error raised by the package."""


class DomainError(FluxonError, ValueError):
    """An argument is outside the domain of the operation."""


class FitError(DomainError):
    """Least-squares fit cannot be performed on the given data."""


class CutoffError(DomainError):
    """Spectral cutoffs are too small for the requested filling."""


class DegeneracyError(DomainError):
    """The Fermi level sits inside a (near) degenerate shell."""

    def __init__(self, message, gap=None):
        super().__init__(message)
        self.gap = gap


class PreconditionError(DomainError):
    """A structural precondition on the input model does not hold."""


class NumericError(FluxonError, ArithmeticError):
    """A numerical procedure failed to converge or to bracket a root."""


class AccuracyError(NumericError):
    """A computed result failed its built-in accuracy check."""
