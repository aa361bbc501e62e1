"""Exception hierarchy for trenq."""


class TrenqError(Exception):
    """Base class for all trenq errors."""


class InputError(TrenqError):
    """Invalid user input: bad potential file, bad flags, bad schema."""


class PotentialConditionError(TrenqError):
    """The potential violates the short-range decay conditions r^2 U -> 0."""


class DegenerateWellError(TrenqError):
    """The transformed well is numerically zero; nothing to compute."""


class NoSuchLevelError(TrenqError):
    """The requested level does not exist for this well depth."""


class ConvergenceError(TrenqError):
    """A quadrature, root bracket or finite-difference limit failed to converge."""
