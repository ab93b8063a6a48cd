"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the range where the model is defined."""


class UnsupportedConfigurationError(ValueError):
    """The requested operation is only available for fair (q = 1/2) coins."""


class SingularConfigurationError(DomainError):
    """The requested relation is singular at this coin phase."""
