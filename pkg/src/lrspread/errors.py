"""Exception types shared across the package.

The CLI maps these onto distinct exit codes, so modules should raise the
most specific type that applies.
"""


class DomainError(ValueError):
    """Inputs are syntactically fine but outside a formula's validity regime."""


class ConvergenceError(RuntimeError):
    """An iterative routine hit its iteration cap before reaching tolerance."""

    def __init__(self, message: str, residual: float | None = None):
        super().__init__(message)
        self.residual = residual


class EmptyFrontError(ValueError):
    """No row of a correlation field ever crossed the requested threshold."""
