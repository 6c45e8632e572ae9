"""Exception types raised across the package.

Every error is a :class:`ValueError` subclass so callers that only care about
"bad input" can catch that, while the CLI maps each class to its own message.
"""


class OrdpatError(ValueError):
    """Base class for all package errors."""


class DuplicateValues(OrdpatError):
    """Two values that must be distinct compare equal."""


class LengthMismatch(OrdpatError):
    pass


class CapExceeded(OrdpatError):
    """An enumeration or composition would exceed its configured cap."""


class PeriodicCollision(OrdpatError):
    """Two iterates (or shifts) coincide, so no order pattern is defined."""


class DuplicateShifts(PeriodicCollision):
    pass


class AlphabetMismatch(OrdpatError):
    pass


class HypothesisViolated(OrdpatError):
    pass


class LengthTooLong(OrdpatError):
    pass


class BadLength(OrdpatError):
    pass


class UnknownName(OrdpatError):
    pass


class ExcludedPoint(OrdpatError):
    """Sequence ends in an infinite run of the top symbol."""


class BadStochasticVector(OrdpatError):
    pass


class NonStationary(OrdpatError):
    pass


class WindowTooLong(OrdpatError):
    pass


class DuplicatePoints(OrdpatError):
    pass


class CensusError(OrdpatError):
    """Internal consistency failure while building a census."""
