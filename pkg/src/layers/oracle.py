"""
Naive enumeration oracle for the basis operators

Literal O(n^m) loops over every index tuple with an explicit equality-pattern
check. Slow on purpose: it is the ground truth the pooled fast path in
`src.layers.basis` is tested against.
"""

import itertools
from functools import lru_cache
from typing import Optional, Tuple

import numpy as np

from src.layers.basis import Normalization
from src.tensors.dense import DenseTensor
from src.tensors.partitions import Partition, equality_pattern
from src.utils.errors import ShapeError


@lru_cache(maxsize=32)
def _tuples_with_patterns(n: int, m: int) -> Tuple[Tuple[Tuple[int, ...], Tuple[int, ...]], ...]:
    return tuple((idx, equality_pattern(idx).rgs) for idx in itertools.product(range(n), repeat=m))


def naive_invariant_apply(gamma: Partition, tensor: DenseTensor, normalization="mean") -> np.ndarray:
    if tensor.order < 1 or gamma.m != tensor.order:
        raise ShapeError(f"Partition of {gamma.m} positions cannot act on an order-{tensor.order} tensor")
    total = np.zeros(tensor.channels, dtype=np.float64)
    count = 0
    for idx, rgs in _tuples_with_patterns(tensor.n, tensor.order):
        if rgs == gamma.rgs:
            total += tensor.data[idx]
            count += 1
    if Normalization(normalization) is Normalization.MEAN and count:
        total /= count
    return total


def naive_equivariant_apply(gamma: Partition, A: DenseTensor, k: int, normalization="mean") -> DenseTensor:
    if A.order != 2:
        raise ShapeError(f"Equivariant bases act on order-2 tensors, got order {A.order}")
    if k < 1 or gamma.m != k + 2:
        raise ShapeError(f"Partition of {gamma.m} positions does not define a map T^2 -> T^{k}")
    n, d = A.n, A.channels
    out = np.zeros((n,) * k + (d,), dtype=np.float64)
    counts = np.zeros((n,) * k, dtype=np.int64)
    for idx, rgs in _tuples_with_patterns(n, k + 2):
        if rgs == gamma.rgs:
            out[idx[2:]] += A.data[idx[0], idx[1]]
            counts[idx[2:]] += 1
    if Normalization(normalization) is Normalization.MEAN:
        nonzero = counts > 0
        out[nonzero] /= counts[nonzero][:, None]
    return DenseTensor(out)


def naive_oracle_apply(gamma: Partition, tensor: DenseTensor, k: Optional[int] = None, normalization="mean"):
    """
    Oracle with the contract of the basis operators: without `k` it is the
    invariant I_gamma (returns one value per channel); with `k` it is the
    equivariant E_gamma: T^2 -> T^k.
    """
    if k is None:
        return naive_invariant_apply(gamma, tensor, normalization)
    return naive_equivariant_apply(gamma, tensor, k, normalization)
