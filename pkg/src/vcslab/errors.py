"""Exception types raised across the package."""


class VcsLabError(Exception):
    """Base class for all package errors."""


class ValidationError(VcsLabError, ValueError):
    """Malformed input: wrong shapes, arities, out-of-range parameters."""


class DomainError(ValidationError):
    """A point lies outside the open poly-disc."""


class NumericalError(VcsLabError, ArithmeticError):
    """A numerical procedure failed (non-convergence, singular operator)."""

    def __init__(self, message, iterations=None):
        super().__init__(message)
        self.iterations = iterations
