"""
Strict equality-pattern bases of the invariant and equivariant linear maps

A basis element indexed by a partition gamma only sees the index tuples whose
equality pattern is exactly gamma (indices equal iff they share a block), so
different partitions have disjoint supports.

The equivariant operators E_gamma: T^2 -> T^k are evaluated with a pooled
fast path: every input index either equals one of the output block values
or is free, free indices are summed out with row/column/trace/total pools,
and the strictness constraints are restored by inclusion-exclusion over the
output block values. Cost is O(n^max(2, k)) per operator instead of the
O(n^(k+2)) enumeration in `src.layers.oracle`.

Every reduction over node indices sorts the pooled values first, so sums
depend only on the multiset of values and node relabelings commute with the
operators bit for bit.
"""

from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Tuple

import numpy as np

from src.tensors.dense import DenseTensor
from src.tensors.partitions import Partition
from src.utils.errors import ShapeError

# Pattern tables are O(n^m) arrays keyed on the graph size
PATTERN_CACHE_SIZE = 64


class Normalization(str, Enum):
    SUM = "sum"
    MEAN = "mean"


def falling_factorial(n: int, b: int) -> int:
    """n (n-1) ... (n-b+1): number of index tuples with b distinct values"""
    if n < b:
        return 0
    result = 1
    for i in range(b):
        result *= n - i
    return result


def sorted_sum(values: np.ndarray, axis: int = 0) -> np.ndarray:
    """
    Sum along `axis` after sorting, making the result order independent.
    The reduced axis is moved last and made contiguous so every caller sums
    a given multiset with the same summation routine.
    """
    ordered = np.ascontiguousarray(np.moveaxis(np.sort(values, axis=axis), axis, -1))
    return ordered.sum(axis=-1)


@lru_cache(maxsize=PATTERN_CACHE_SIZE)
def pattern_mask(rgs: Tuple[int, ...], n: int) -> np.ndarray:
    """Boolean tensor of shape (n,)*m: True where the tuple's pattern is exactly rgs"""
    m = len(rgs)
    grids = np.indices((n,) * m) if m else np.zeros((0,))
    mask = np.ones((n,) * m, dtype=bool)
    for p in range(m):
        for q in range(p + 1, m):
            equal = grids[p] == grids[q]
            mask &= equal if rgs[p] == rgs[q] else ~equal
    mask.setflags(write=False)
    return mask


@lru_cache(maxsize=PATTERN_CACHE_SIZE)
def pattern_indices(rgs: Tuple[int, ...], n: int) -> np.ndarray:
    """Flat (row-major) positions of the tuples whose pattern is exactly rgs"""
    idx = np.flatnonzero(pattern_mask(rgs, n))
    idx.setflags(write=False)
    return idx


@lru_cache(maxsize=PATTERN_CACHE_SIZE)
def pattern_block_values(rgs: Tuple[int, ...], n: int) -> np.ndarray:
    """
    For each tuple of pattern rgs (in `pattern_indices` order), the node value
    of every block: array of shape (count, blocks).
    """
    m = len(rgs)
    idx = pattern_indices(rgs, n)
    coords = np.unravel_index(idx, (n,) * m) if m else ()
    firsts = [rgs.index(b) for b in range(max(rgs) + 1)] if m else []
    values = np.stack([coords[p] for p in firsts], axis=1) if firsts else np.zeros((idx.size, 0), dtype=np.intp)
    values.setflags(write=False)
    return values


def _normalizer(normalization) -> Normalization:
    return Normalization(normalization)


def invariant_basis_apply(gamma: Partition, tensor: DenseTensor, normalization="mean") -> np.ndarray:
    """
    I_gamma T: sum of T over the index tuples whose pattern is exactly gamma,
    one value per channel. Mean normalization divides by n(n-1)...(n-b+1);
    the result is 0 when n < b.
    """
    if tensor.order < 1 or gamma.m != tensor.order:
        raise ShapeError(f"Partition of {gamma.m} positions cannot act on an order-{tensor.order} tensor")
    n, d = tensor.n, tensor.channels
    count = falling_factorial(n, gamma.blocks)
    if count == 0:
        return np.zeros(d, dtype=np.float64)
    values = tensor.data.reshape(-1, d)[pattern_indices(gamma.rgs, n)]
    total = sorted_sum(values, axis=0)
    if _normalizer(normalization) is Normalization.MEAN:
        total = total / count
    return total


@dataclass(frozen=True)
class EquivariantLayout:
    """How an equivariant partition of {input_1, input_2, output_1..output_k} splits"""

    output: Partition  # pattern restricted to output positions
    tied: Tuple[int, int]  # output block bound to each input index, -1 if free
    free_shared: bool  # both inputs free and in the same block

    @property
    def free(self) -> int:
        loose = sum(1 for t in self.tied if t < 0)
        return 1 if self.free_shared else loose

    @property
    def out_blocks(self) -> int:
        return self.output.blocks


@lru_cache(maxsize=None)
def equivariant_layout(rgs: Tuple[int, ...]) -> EquivariantLayout:
    out_rgs = rgs[2:]
    block_to_out = {}
    for block in out_rgs:
        if block not in block_to_out:
            block_to_out[block] = len(block_to_out)
    tied = tuple(block_to_out.get(rgs[p], -1) for p in (0, 1))
    free_shared = tied == (-1, -1) and rgs[0] == rgs[1]
    output = Partition(tuple(block_to_out[b] for b in out_rgs))
    return EquivariantLayout(output=output, tied=tied, free_shared=free_shared)


def _place(values: np.ndarray, axes: Tuple[int, ...], c: int) -> np.ndarray:
    """Reshape an (n,)*len(axes) + (d,) array so its node axes sit at `axes` of an order-c tensor"""
    shape = [1] * c + [values.shape[-1]]
    for axis, size in zip(axes, values.shape[:-1]):
        shape[axis] = size
    return values.reshape(shape)


class _Pools:
    """Order-independent pooled sums of an order-2 tensor"""

    def __init__(self, A: np.ndarray):
        n, _, d = A.shape
        self.A = A
        self.diag = A[np.arange(n), np.arange(n)]
        self.rowsum = sorted_sum(A, axis=1)
        self.colsum = sorted_sum(A, axis=0)
        self.trace = sorted_sum(self.diag, axis=0)
        self.total = sorted_sum(A.reshape(n * n, d), axis=0)

    def pair(self, a: int, b: int, c: int) -> np.ndarray:
        """A[u_a, u_b] as a broadcastable order-c tensor"""
        if a == b:
            return _place(self.diag, (a,), c)
        if a < b:
            return _place(self.A, (a, b), c)
        return _place(self.A.transpose(1, 0, 2), (b, a), c)

    def vector(self, v: np.ndarray, a: int, c: int) -> np.ndarray:
        return _place(v, (a,), c)


def pooled_block_values(gamma: Partition, A: DenseTensor, k: int, normalization="mean", pools: "_Pools" = None) -> np.ndarray:
    """
    Value of E_gamma A as a function of the output block values only: an
    order-c tensor G (c = blocks of gamma on the output positions) such that
    (E_gamma A)[j] = G[u(j)] whenever j has the output pattern of gamma.
    """
    layout = equivariant_layout(gamma.rgs)
    n, d = A.n, A.channels
    c = layout.out_blocks
    shape = (n,) * c + (d,)
    pools = pools if pools is not None else _Pools(A.data)
    t0, t1 = layout.tied

    if layout.free == 0:
        G = pools.pair(t0, t1, c)
        count = 1
    elif layout.free_shared:
        excluded = pools.pair(0, 0, c)
        for t in range(1, c):
            excluded = excluded + pools.pair(t, t, c)
        G = pools.trace - excluded
        count = falling_factorial(n - c, 1)
    elif layout.free == 1 and t0 < 0:
        excluded = pools.pair(0, t1, c)
        for t in range(1, c):
            excluded = excluded + pools.pair(t, t1, c)
        G = pools.vector(pools.colsum, t1, c) - excluded
        count = falling_factorial(n - c, 1)
    elif layout.free == 1:
        excluded = pools.pair(t0, 0, c)
        for t in range(1, c):
            excluded = excluded + pools.pair(t0, t, c)
        G = pools.vector(pools.rowsum, t0, c) - excluded
        count = falling_factorial(n - c, 1)
    else:
        G = pools.total - pools.trace
        for t in range(c):
            G = G - (pools.vector(pools.rowsum, t, c) - pools.pair(t, t, c))
        for t in range(c):
            G = G - (pools.vector(pools.colsum, t, c) - pools.pair(t, t, c))
        for s in range(c):
            for t in range(c):
                if s != t:
                    G = G + pools.pair(s, t, c)
        count = falling_factorial(n - c, 2)

    if count <= 0:
        return np.zeros(shape, dtype=np.float64)
    G = np.broadcast_to(G, shape)
    if _normalizer(normalization) is Normalization.MEAN and count != 1:
        G = G / count
    return np.ascontiguousarray(G)


def equivariant_basis_apply(gamma: Partition, A: DenseTensor, k: int, normalization="mean") -> DenseTensor:
    """
    E_gamma A for gamma a partition of {1..k+2}; positions 1, 2 index the
    input, positions 3..k+2 the output. Entries whose output tuple violates
    gamma's output pattern are zero.
    """
    if A.order != 2:
        raise ShapeError(f"Equivariant bases act on order-2 tensors, got order {A.order}")
    if k < 1 or gamma.m != k + 2:
        raise ShapeError(f"Partition of {gamma.m} positions does not define a map T^2 -> T^{k}")
    return DenseTensor(expand_basis(gamma, A, k, normalization))


def expand_basis(gamma: Partition, A: DenseTensor, k: int, normalization, pools: "_Pools" = None) -> np.ndarray:
    n, d = A.n, A.channels
    layout = equivariant_layout(gamma.rgs)
    G = pooled_block_values(gamma, A, k, normalization, pools)
    out = np.zeros(n ** k * d, dtype=np.float64).reshape(n ** k, d)
    idx = pattern_indices(layout.output.rgs, n)
    if idx.size:
        coords = pattern_block_values(layout.output.rgs, n)
        out[idx] = G[tuple(coords[:, t] for t in range(layout.out_blocks))]
    return out.reshape((n,) * k + (d,))


def equivariant_segment(gamma: Partition, A: DenseTensor, k: int, normalization="mean", pools: "_Pools" = None) -> np.ndarray:
    """
    Non-zero part of E_gamma A: values at the tuples of gamma's output
    pattern, in `pattern_indices` order, shape (count, d).
    """
    layout = equivariant_layout(gamma.rgs)
    G = pooled_block_values(gamma, A, k, normalization, pools)
    coords = pattern_block_values(layout.output.rgs, A.n)
    return G[tuple(coords[:, t] for t in range(layout.out_blocks))]


def make_pools(A: DenseTensor) -> _Pools:
    """Precompute the pooled sums shared by all equivariant operators on A"""
    if A.order != 2:
        raise ShapeError(f"Equivariant bases act on order-2 tensors, got order {A.order}")
    return _Pools(A.data)


def bias_basis_tensor(gamma: Partition, k: int, n: int) -> DenseTensor:
    """Constant 0/1 tensor of order k: 1 exactly where the tuple's pattern is gamma"""
    if gamma.m != k:
        raise ShapeError(f"Partition of {gamma.m} positions cannot index an order-{k} bias tensor")
    return DenseTensor(pattern_mask(gamma.rgs, n).astype(np.float64)[..., None])
