"""Exception hierarchy shared across the package."""


class DisclabError(Exception):
    """Base class for all domain errors raised by this package."""


class DimensionMismatchError(DisclabError):
    """Point set and test box (or generator) disagree on dimension."""


class EmptyPointSetError(DisclabError):
    """A discrepancy was requested for a point set with no points."""


class CoordinateError(DisclabError, ValueError):
    """A coordinate lies outside [0, 1) or cannot be parsed."""


class GuardError(DisclabError):
    """An enumeration or size guard was exceeded."""
