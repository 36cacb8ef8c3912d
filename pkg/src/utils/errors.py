"""Exception hierarchy shared by every module."""

from typing import Any, Optional


class IncompatibilityError(Exception):
    """Base class for all errors raised by the toolkit."""
    pass


class InvalidInputError(IncompatibilityError, ValueError):
    """Arguments or data violate a documented precondition."""
    pass


class DimensionGuardError(InvalidInputError):
    """The multi-copy space d**n exceeds the configured guard."""
    pass


class InconclusiveError(IncompatibilityError):
    """The solver could not certify an optimum.

    Never read this as non-membership: the decision is simply unknown.
    """

    def __init__(self, message: str, status: Optional[str] = None, residual: Optional[float] = None):
        super().__init__(message)
        self.status = status
        self.residual = residual


class HierarchyViolationError(IncompatibilityError):
    """A proven inclusion between threshold sets failed numerically."""

    def __init__(self, message: str, lower: str = "", upper: str = "", values: Any = None):
        super().__init__(message)
        self.lower = lower
        self.upper = upper
        self.values = values
