"""
Error Types - Exception Hierarchy for pfmetrics

Every error raised by the library derives from PFMError. The command line
front end maps the three families to exit codes: InputError -> 2,
PreconditionError -> 3, SolverError -> 1.
"""

from typing import Optional


class PFMError(Exception):
    """Base class for all library errors."""

    exit_code = 1


# --- input errors -----------------------------------------------------------

class InputError(PFMError, ValueError):
    """Malformed input data or arguments."""

    exit_code = 2


class AllZeroImage(InputError):
    pass


class NegativePixel(InputError):
    pass


class NonSquare(InputError):
    pass


class NonFiniteWeight(InputError):
    pass


class ColorUnsupported(InputError):
    pass


class ImageFormatError(InputError):
    pass


class ImageReadError(InputError):
    pass


class OversampleZero(InputError):
    pass


class NonPositiveGamma(InputError):
    pass


class EmptyCorpus(InputError):
    pass


class UnknownMetric(InputError):
    pass


# --- metric preconditions ---------------------------------------------------

class PreconditionError(PFMError):
    """A metric hypothesis does not hold for the given measures."""

    exit_code = 3


class ZeroMass(PreconditionError):
    pass


class MassMismatch(PreconditionError):
    pass


class NotProbability(PreconditionError):
    pass


class GridMismatch(PreconditionError):
    pass


class CentersDiffer(PreconditionError):
    pass


class TooLarge(PreconditionError):
    pass


class InfeasibleParams(PreconditionError):
    """Raised when p(s - r - 1) + alpha < d fails for the matched moment order r."""

    def __init__(self, message: str, margin: float, matched_moment_order: Optional[int] = None):
        super().__init__(message)
        self.margin = margin
        self.matched_moment_order = matched_moment_order


# --- solver -----------------------------------------------------------------

class SolverError(PFMError):
    exit_code = 1


class SolverFailed(SolverError):
    pass


class CertificationFailed(SolverError):
    pass


class CrossCheckFailed(SolverError):
    """Two independent evaluation paths of the same quantity disagree."""


__all__ = [
    'PFMError',
    'InputError',
    'AllZeroImage',
    'NegativePixel',
    'NonSquare',
    'NonFiniteWeight',
    'ColorUnsupported',
    'ImageFormatError',
    'ImageReadError',
    'OversampleZero',
    'NonPositiveGamma',
    'EmptyCorpus',
    'UnknownMetric',
    'PreconditionError',
    'ZeroMass',
    'MassMismatch',
    'NotProbability',
    'GridMismatch',
    'CentersDiffer',
    'TooLarge',
    'InfeasibleParams',
    'SolverError',
    'SolverFailed',
    'CertificationFailed',
    'CrossCheckFailed',
]
