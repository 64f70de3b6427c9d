"""Exception types shared across the package."""


class EplabError(Exception):
    """Base class for all package-specific errors."""


class ValidationError(EplabError, ValueError):
    """An input violates a domain constraint (range, shape, or matrix invariant)."""


class ConvergenceError(EplabError, RuntimeError):
    """An iterative solver hit its iteration cap.

    Carries the best value and the residual gap reached so far, so callers can
    decide whether the partial result is still usable.
    """

    def __init__(self, message: str, value: float | None = None, gap: float | None = None):
        super().__init__(message)
        self.value = value
        self.gap = gap


class TomographyError(EplabError, RuntimeError):
    """Count data is unusable: missing settings, not informationally complete,
    mismatched datasets, or a diverging likelihood iteration."""
