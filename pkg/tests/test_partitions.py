import pytest

from src.tensors.partitions import (
    Partition,
    bell,
    enumerate_partitions,
    equality_pattern,
    partition_index,
)
from src.utils.errors import ArgumentError, DimensionLimitError


def test_bell_numbers():
    assert [bell(m) for m in range(6)] == [1, 1, 2, 5, 15, 52]
    assert bell(12) == 4213597


def test_bell_limits():
    with pytest.raises(ArgumentError):
        bell(-1)
    with pytest.raises(DimensionLimitError):
        bell(13)


@pytest.mark.parametrize("m", range(0, 7))
def test_enumeration_matches_bell(m):
    partitions = enumerate_partitions(m)
    assert len(partitions) == bell(m)
    assert len({p.rgs for p in partitions}) == len(partitions)


def test_enumeration_order():
    partitions = enumerate_partitions(3)
    assert [p.rgs for p in partitions] == [(0, 0, 0), (0, 0, 1), (0, 1, 0), (0, 1, 1), (0, 1, 2)]
    assert enumerate_partitions(0) == [Partition(())]


def test_enumeration_limit():
    with pytest.raises(DimensionLimitError):
        enumerate_partitions(9)


def test_partition_index_roundtrip():
    for i, p in enumerate(enumerate_partitions(5)):
        assert partition_index(p) == i


def test_canonical_form_is_enforced():
    with pytest.raises(ArgumentError):
        Partition((1, 0))
    with pytest.raises(ArgumentError):
        Partition((0, 2))


def test_equality_pattern():
    assert equality_pattern([7, 7, 3]).rgs == (0, 0, 1)
    assert equality_pattern(["a", "b", "a", "c"]).rgs == (0, 1, 0, 2)
    assert equality_pattern([]).rgs == ()


def test_blocks_and_restrict():
    p = Partition((0, 1, 0, 2))
    assert p.blocks == 3
    assert p.block_positions() == ((0, 2), (1,), (3,))
    assert p.restrict([1, 3]).rgs == (0, 1)
    assert p.restrict([0, 2]).rgs == (0, 0)
    assert str(p) == "{1,3 | 2 | 4}"
