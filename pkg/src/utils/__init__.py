"""Utility modules."""

from .errors import (
    DimensionGuardError,
    HierarchyViolationError,
    IncompatibilityError,
    InconclusiveError,
    InvalidInputError,
)
from .logging import get_logger, setup_logging

__all__ = [
    "get_logger",
    "setup_logging",
    "IncompatibilityError",
    "InvalidInputError",
    "DimensionGuardError",
    "InconclusiveError",
    "HierarchyViolationError",
]
