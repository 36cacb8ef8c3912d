"""Deterministic n-simulability: some partition into at most n blocks is blockwise jointly measurable."""

from typing import Dict, FrozenSet, Optional, Tuple

from src.jm import jm_feasible, jm_visibility
from src.measurements import Assemblage, Visibility
from src.structures.partitions import PartitionCollection, enumerate_partitions
from src.utils.logging import get_logger

logger = get_logger(__name__)


class BlockOracle:
    """Memoized per-block joint measurability queries on one assemblage."""

    def __init__(self, assemblage: Assemblage, tol: Optional[float] = None):
        self.assemblage = assemblage
        self.tol = tol
        self._visibility: Dict[FrozenSet[int], float] = {}
        self._feasible: Dict[FrozenSet[int], bool] = {}

    def visibility(self, block: Tuple[int, ...]) -> float:
        key = frozenset(block)
        if key not in self._visibility:
            if len(block) == 1:
                self._visibility[key] = 1.0
            else:
                self._visibility[key] = jm_visibility(self.assemblage, sorted(block), tol=self.tol).eta
        return self._visibility[key]

    def feasible(self, block: Tuple[int, ...]) -> bool:
        key = frozenset(block)
        if key not in self._feasible:
            if len(block) == 1:
                self._feasible[key] = True
            else:
                self._feasible[key], _ = jm_feasible(self.assemblage, sorted(block), tol=self.tol)
        return self._feasible[key]


def best_sim_det_partition(
    assemblage: Assemblage, n: int, tol: Optional[float] = None, oracle: Optional[BlockOracle] = None
) -> Tuple[Visibility, PartitionCollection]:
    """Partition maximizing its weakest block's visibility; first in enumeration order on ties."""
    oracle = oracle or BlockOracle(assemblage, tol)
    best_value, best_partition = -1.0, None
    for partition in enumerate_partitions(assemblage.settings, n):
        value = 1.0
        for block in sorted(partition.blocks, key=len):
            value = min(value, oracle.visibility(block))
            if value <= best_value:
                break
        if value > best_value:
            best_value, best_partition = value, partition
    visibility = Visibility.clipped(best_value)
    logger.info("Deterministic simulability visibility", n=n, eta=visibility.eta, partition=str(best_partition))
    return visibility, best_partition


def sim_det_visibility(assemblage: Assemblage, n: int, tol: Optional[float] = None) -> Visibility:
    """max over partitions of min over blocks of the block's joint measurability visibility."""
    visibility, _ = best_sim_det_partition(assemblage, n, tol)
    return visibility


def sim_det_feasible(
    assemblage: Assemblage, n: int, tol: Optional[float] = None
) -> Tuple[bool, Optional[PartitionCollection]]:
    """True with the first partition whose every block is jointly measurable."""
    oracle = BlockOracle(assemblage, tol)
    for partition in enumerate_partitions(assemblage.settings, n):
        if all(oracle.feasible(block) for block in sorted(partition.blocks, key=len)):
            logger.info("Deterministically simulable", n=n, partition=str(partition))
            return True, partition
    logger.info("Not deterministically simulable", n=n)
    return False, None
