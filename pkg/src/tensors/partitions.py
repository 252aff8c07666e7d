"""
Set partitions in restricted-growth-string form and Bell numbers

Partitions index the invariant and equivariant linear bases: the position of
a partition in `enumerate_partitions(m)` is the position of its coefficient
in every parameter vector, so the enumeration order is part of the map file
format and must never change.
"""

from dataclasses import dataclass
from functools import lru_cache
from typing import List, Sequence, Tuple

from src.utils.errors import ArgumentError, DimensionLimitError

BELL_LIMIT = 12
ENUMERATION_LIMIT = 8


@dataclass(frozen=True)
class Partition:
    """A set partition of {1..m} stored as its canonical restricted-growth string"""

    rgs: Tuple[int, ...]

    def __post_init__(self):
        rgs = tuple(int(x) for x in self.rgs)
        object.__setattr__(self, "rgs", rgs)
        highest = -1
        for value in rgs:
            if value < 0 or value > highest + 1:
                raise ArgumentError(f"Not a canonical restricted-growth string: {rgs}")
            highest = max(highest, value)

    @property
    def m(self) -> int:
        return len(self.rgs)

    @property
    def blocks(self) -> int:
        return max(self.rgs) + 1 if self.rgs else 0

    def block_positions(self) -> Tuple[Tuple[int, ...], ...]:
        """0-based positions of every block, blocks in order of first appearance"""
        groups: List[List[int]] = [[] for _ in range(self.blocks)]
        for position, block in enumerate(self.rgs):
            groups[block].append(position)
        return tuple(tuple(g) for g in groups)

    def restrict(self, positions: Sequence[int]) -> "Partition":
        """Partition induced on a subsequence of positions (re-canonicalized)"""
        return equality_pattern([self.rgs[p] for p in positions])

    def __str__(self) -> str:
        return "{" + " | ".join(",".join(str(p + 1) for p in block) for block in self.block_positions()) + "}"


def equality_pattern(values: Sequence) -> Partition:
    """Partition of positions induced by which entries of `values` are equal"""
    labels = {}
    rgs = []
    for value in values:
        if value not in labels:
            labels[value] = len(labels)
        rgs.append(labels[value])
    return Partition(tuple(rgs))


@lru_cache(maxsize=None)
def bell(m: int) -> int:
    """m-th Bell number computed with the Bell triangle"""
    if m < 0:
        raise ArgumentError(f"Bell numbers are defined for m >= 0, got {m}")
    if m > BELL_LIMIT:
        raise DimensionLimitError(f"bell({m}) exceeds the supported limit m <= {BELL_LIMIT}")
    row = [1]
    for _ in range(m):
        nxt = [row[-1]]
        for value in row:
            nxt.append(nxt[-1] + value)
        row = nxt
    return row[0]


@lru_cache(maxsize=None)
def _partitions(m: int) -> Tuple[Partition, ...]:
    result = []

    def extend(prefix: List[int], highest: int):
        if len(prefix) == m:
            result.append(Partition(tuple(prefix)))
            return
        for value in range(highest + 2):
            prefix.append(value)
            extend(prefix, max(highest, value))
            prefix.pop()

    if m == 0:
        return (Partition(()),)
    extend([0], 0)
    return tuple(result)


def enumerate_partitions(m: int) -> List[Partition]:
    """All partitions of {1..m} in lexicographic RGS order (00.., first; 012.., last)"""
    if m < 0:
        raise ArgumentError(f"Partition size must be >= 0, got {m}")
    if m > ENUMERATION_LIMIT:
        raise DimensionLimitError(f"enumerate_partitions({m}) exceeds the supported limit m <= {ENUMERATION_LIMIT}")
    return list(_partitions(m))


def partition_index(partition: Partition) -> int:
    """Position of a partition in `enumerate_partitions(partition.m)`"""
    return _partitions(partition.m).index(partition)
