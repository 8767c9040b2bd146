"""Exception types shared across the package."""


class DomainError(ValueError):
    """An input lies outside the mathematical domain of an operation."""


class RegimeError(DomainError):
    """The curvature data falls in a regime with no comparison bound."""
