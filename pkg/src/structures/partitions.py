"""Set partitions of measurement settings, enumerated by restricted growth strings."""

from typing import Dict, Iterator, List, Sequence, Tuple

from pydantic import BaseModel, ConfigDict, model_validator

from src.utils.errors import InvalidInputError


class PartitionCollection(BaseModel):
    """Disjoint nonempty blocks of 0-based settings covering range(m)."""

    model_config = ConfigDict(frozen=True)

    blocks: Tuple[Tuple[int, ...], ...]

    @model_validator(mode="after")
    def check_cover(self):
        seen = sorted(x for block in self.blocks for x in block)
        if any(len(block) == 0 for block in self.blocks):
            raise ValueError("partition blocks must be nonempty")
        if seen != list(range(len(seen))):
            raise ValueError(f"blocks {self.blocks} are not a disjoint cover of range({len(seen)})")
        return self

    @classmethod
    def from_growth_string(cls, rgs: Sequence[int]) -> "PartitionCollection":
        blocks: Dict[int, List[int]] = {}
        for x, b in enumerate(rgs):
            blocks.setdefault(b, []).append(x)
        return cls(blocks=tuple(tuple(blocks[b]) for b in sorted(blocks)))

    @property
    def m(self) -> int:
        return sum(len(block) for block in self.blocks)

    @property
    def block_count(self) -> int:
        return len(self.blocks)

    def assignment(self) -> List[int]:
        """Block index of each setting, i.e. the deterministic map x -> f(x)."""
        out = [0] * self.m
        for b, block in enumerate(self.blocks):
            for x in block:
                out[x] = b
        return out

    def locate(self, x: int) -> Tuple[int, int]:
        """(block index, position inside the block) of setting x."""
        for b, block in enumerate(self.blocks):
            if x in block:
                return b, block.index(x)
        raise InvalidInputError(f"setting {x} not in partition {self.blocks}")

    def one_based(self) -> List[List[int]]:
        return [[x + 1 for x in block] for block in self.blocks]

    def __str__(self) -> str:
        return "[" + ", ".join("(" + ",".join(str(x) for x in block) + ")" for block in self.one_based()) + "]"


def restricted_growth_strings(m: int, n: int) -> Iterator[Tuple[int, ...]]:
    """Strings a with a[0] = 0, a[i] <= max(a[:i]) + 1 and max(a) < n, lexicographic."""

    def extend(prefix: List[int], top: int) -> Iterator[Tuple[int, ...]]:
        if len(prefix) == m:
            yield tuple(prefix)
            return
        for value in range(min(top + 1, n - 1) + 1):
            prefix.append(value)
            yield from extend(prefix, max(top, value))
            prefix.pop()

    if m == 0:
        return
    yield from extend([0], 0)


def enumerate_partitions(m: int, n: int) -> List[PartitionCollection]:
    """All partitions of range(m) into at most n blocks, in growth-string order."""
    if not 1 <= n <= m:
        raise InvalidInputError(f"need 1 <= n <= m, got m={m}, n={n}")
    return [PartitionCollection.from_growth_string(rgs) for rgs in restricted_growth_strings(m, n)]
