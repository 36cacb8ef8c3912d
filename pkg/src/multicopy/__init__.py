"""n-copy joint measurability and cloning bounds."""

from .basis import OperatorBasis, gell_mann_basis, monomial_pairings
from .cloning import clone_bound, clone_bound_fraction, jm_clone_bound
from .ncopy import (
    MultiCopyParent,
    check_dimension,
    ncopy_feasible,
    ncopy_visibility,
    ncopy_visibility_with_parent,
    parent_to_json,
    product_parent,
    symmetrize_parent,
    verify_multicopy_statistics,
)

__all__ = [
    "OperatorBasis",
    "gell_mann_basis",
    "monomial_pairings",
    "clone_bound",
    "clone_bound_fraction",
    "jm_clone_bound",
    "MultiCopyParent",
    "check_dimension",
    "ncopy_feasible",
    "ncopy_visibility",
    "ncopy_visibility_with_parent",
    "parent_to_json",
    "product_parent",
    "symmetrize_parent",
    "verify_multicopy_statistics",
]
