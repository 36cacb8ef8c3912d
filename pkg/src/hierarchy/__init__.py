"""Threshold profiles, chain checks and the property harness."""

from .fuzz import FuzzRecord, FuzzReport, hierarchy_fuzz
from .profile import (
    CHAIN,
    ENTRY_LABELS,
    ENTRY_ORDER,
    ThresholdEntry,
    ThresholdProfile,
    check_chain,
    threshold_profile,
)
from .report import format_text, print_profile, profile_table, write_csv, write_json

__all__ = [
    "CHAIN",
    "ENTRY_LABELS",
    "ENTRY_ORDER",
    "ThresholdEntry",
    "ThresholdProfile",
    "check_chain",
    "threshold_profile",
    "FuzzRecord",
    "FuzzReport",
    "hierarchy_fuzz",
    "format_text",
    "print_profile",
    "profile_table",
    "write_csv",
    "write_json",
]
