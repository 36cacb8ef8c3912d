"""Compatibility structures: partitions, deterministic n-simulability and n-wise compatibility."""

from .deterministic import BlockOracle, best_sim_det_partition, sim_det_feasible, sim_det_visibility
from .nwise import (
    BlockParent,
    ConvexDecomposition,
    DecompositionTerm,
    decomposition_to_json,
    nwise_distance,
    nwise_feasible,
    nwise_visibility,
    pairwise_compatible,
    pairwise_visibility,
    verify_decomposition,
)
from .partitions import PartitionCollection, enumerate_partitions, restricted_growth_strings

__all__ = [
    "PartitionCollection",
    "enumerate_partitions",
    "restricted_growth_strings",
    "BlockOracle",
    "best_sim_det_partition",
    "sim_det_feasible",
    "sim_det_visibility",
    "BlockParent",
    "DecompositionTerm",
    "ConvexDecomposition",
    "nwise_distance",
    "nwise_feasible",
    "nwise_visibility",
    "verify_decomposition",
    "decomposition_to_json",
    "pairwise_compatible",
    "pairwise_visibility",
]
