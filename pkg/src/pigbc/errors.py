"""Exception hierarchy shared by every module."""


class DomainError(ValueError):
    """An argument lies outside the parameter domain of an operation."""


class NotInRegionError(DomainError):
    """A point was expected to lie in a low-ground/high-ground region but does not."""


class DegenerateError(DomainError):
    """The request is well formed but the geometry is degenerate (e.g. ``x = 0``)."""


class PreconditionError(DomainError):
    """The channel does not satisfy the precondition of a bound (e.g. it is anti-degradable)."""
