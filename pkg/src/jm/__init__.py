"""Standard joint measurability."""

from .parent import ParentPovm, jm_distance, jm_feasible, jm_visibility, noisy_xz_parent, verify_parent

__all__ = [
    "ParentPovm",
    "jm_feasible",
    "jm_visibility",
    "jm_distance",
    "verify_parent",
    "noisy_xz_parent",
]
