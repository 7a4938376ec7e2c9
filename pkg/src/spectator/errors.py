"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain of an operation."""


class IntegrationError(ArithmeticError):
    """Adaptive quadrature failed to reach the requested tolerance."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class FitError(RuntimeError):
    """A fit inside a simulation pipeline did not converge."""

    def __init__(self, message, point=None):
        super().__init__(message)
        self.point = point


class ConfigError(ValueError):
    """Invalid configuration file or value."""
