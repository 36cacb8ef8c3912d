"""Measurement value types, constructors, noise and the assemblage norm."""

from .builders import (
    builtin_assemblage,
    make_pauli_assemblage,
    permute_outcomes,
    random_assemblage,
    restrict,
)
from .codec import assemblage_from_json, assemblage_to_json, operator_from_json, operator_to_json
from .noise import (
    assemblage_distance,
    assemblage_norm,
    depolarize,
    measurements_from_steering,
    steering_assemblage,
)
from .operators import (
    Assemblage,
    HermitianOp,
    Measurement,
    SubnormalizedStateAssemblage,
    Visibility,
)

__all__ = [
    "HermitianOp",
    "Measurement",
    "Assemblage",
    "Visibility",
    "SubnormalizedStateAssemblage",
    "make_pauli_assemblage",
    "builtin_assemblage",
    "random_assemblage",
    "restrict",
    "permute_outcomes",
    "depolarize",
    "assemblage_norm",
    "assemblage_distance",
    "steering_assemblage",
    "measurements_from_steering",
    "assemblage_to_json",
    "assemblage_from_json",
    "operator_to_json",
    "operator_from_json",
]
