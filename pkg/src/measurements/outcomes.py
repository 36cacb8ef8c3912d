"""Canonical vector-outcome labels shared by every parent-POVM formulation."""

import itertools
from typing import Dict, List, Sequence, Tuple

Label = Tuple[int, ...]


def outcome_tuples(counts: Sequence[int]) -> List[Label]:
    """All outcome vectors (a_1, ..., a_m), lexicographic."""
    return list(itertools.product(*(range(k) for k in counts)))


def marginal_groups(counts: Sequence[int]) -> Dict[Tuple[int, int], List[int]]:
    """Map (position, outcome) to indices of the labels with that coordinate."""
    groups: Dict[Tuple[int, int], List[int]] = {}
    for index, label in enumerate(outcome_tuples(counts)):
        for position, a in enumerate(label):
            groups.setdefault((position, a), []).append(index)
    return groups


def label_key(prefix: str, label: Label) -> str:
    """Stable variable label, e.g. ``G[0,1,1]``."""
    return f"{prefix}[{','.join(str(a) for a in label)}]"
