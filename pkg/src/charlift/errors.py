"""Exception hierarchy shared by every charlift module."""


class CharliftError(Exception):
    """Base class for all library errors."""


class EmptyGroupError(CharliftError, ValueError):
    pass


class RangeError(CharliftError, ValueError):
    pass


class DomainError(CharliftError, ValueError):
    pass


class RegularityError(CharliftError, ValueError):
    """A hyperbolic coordinate is zero, so its sign is undefined."""


class SingularityError(CharliftError, ValueError):
    """Two diagonal entries coincide."""

    def __init__(self, i: int, j: int, message: str | None = None):
        self.pair = (i, j)
        super().__init__(message or f"non-regular point: entries h_{i} and h_{j} coincide")


class CayleyDomainError(CharliftError, ValueError):
    pass


class PoleOnContourError(CharliftError, ValueError):
    pass


class QuadratureGuardError(CharliftError, ValueError):
    """A pole sits closer to the nodes than the quadrature can resolve."""
