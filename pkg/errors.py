"""Exception hierarchy for the partial matching solver."""


class PartialMatchingError(Exception):
    """Base class for all solver errors."""


class ValidationError(PartialMatchingError, ValueError):
    """An input violates a documented invariant or precondition."""


class SizeLimitError(ValidationError):
    """A verification path was asked to run beyond its size guard."""


class NearKinkError(ValidationError):
    """Finite differences would cross a clamp or feasibility threshold."""


class CheckError(PartialMatchingError):
    """A verification run (oracle agreement, scaling ratio) found a violation."""
