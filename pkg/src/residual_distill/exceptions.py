"""Exception types raised across the package."""


class ValidationError(ValueError):
    """Input violates a structural invariant (normalisation, hermiticity, ...)."""


class PSDError(ValidationError):
    """Matrix has an eigenvalue below the positivity tolerance."""


class DomainError(ValueError):
    """Scalar argument lies outside the allowed range."""


class DimensionError(ValueError):
    """Operand dimensions are inconsistent."""


class CycleError(ValueError):
    """Resource graph contains a directed cycle or two equal free sets."""

    def __init__(self, message, nodes=()):
        super().__init__(message)
        self.nodes = tuple(nodes)
