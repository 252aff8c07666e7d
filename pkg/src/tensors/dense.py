"""
Order-k dense tensors with a channel axis and the node-permutation action
"""

from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from src.utils.errors import ArgumentError, ShapeError


@dataclass(frozen=True, eq=False)
class DenseTensor:
    """
    Real tensor of order k with size n on every node mode plus a trailing
    channel axis: `data.shape == (n,) * k + (d,)`. Row-major storage with the
    channel fastest matches the flat layout of length n^k * d.
    """

    data: np.ndarray

    def __post_init__(self):
        data = np.array(self.data, dtype=np.float64)
        if data.ndim < 1:
            raise ShapeError("A tensor needs at least the channel axis")
        if data.shape[-1] < 1:
            raise ShapeError("Channel count must be positive")
        modes = data.shape[:-1]
        if modes and len(set(modes)) != 1:
            raise ShapeError(f"All node modes must share one size, got {modes}")
        if not np.all(np.isfinite(data)):
            raise ShapeError("Tensor entries must be finite")
        data.setflags(write=False)
        object.__setattr__(self, "data", data)

    @classmethod
    def from_flat(cls, order: int, n: int, channels: int, values: Sequence[float]) -> "DenseTensor":
        values = np.asarray(values, dtype=np.float64)
        expected = n ** order * channels
        if values.size != expected:
            raise ShapeError(f"Expected {expected} values for order {order}, n={n}, d={channels}; got {values.size}")
        return cls(values.reshape((n,) * order + (channels,)))

    @property
    def order(self) -> int:
        return self.data.ndim - 1

    @property
    def n(self) -> int:
        return self.data.shape[0] if self.order > 0 else 0

    @property
    def channels(self) -> int:
        return self.data.shape[-1]

    @property
    def flat(self) -> np.ndarray:
        return self.data.reshape(-1)

    def __eq__(self, other) -> bool:
        if not isinstance(other, DenseTensor):
            return NotImplemented
        return self.data.shape == other.data.shape and bool(np.array_equal(self.data, other.data))

    def __hash__(self):
        return hash((self.data.shape, self.data.tobytes()))


@dataclass(frozen=True)
class Permutation:
    """Bijection on {0..n-1}; `image[i]` is the image of i"""

    image: Tuple[int, ...]

    def __post_init__(self):
        image = tuple(int(i) for i in self.image)
        if sorted(image) != list(range(len(image))):
            raise ArgumentError(f"Not a permutation: {image}")
        object.__setattr__(self, "image", image)

    @property
    def n(self) -> int:
        return len(self.image)

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(n)))

    @classmethod
    def random(cls, n: int, rng: Optional[np.random.Generator] = None) -> "Permutation":
        rng = rng if rng is not None else np.random.default_rng()
        return cls(tuple(int(i) for i in rng.permutation(n)))

    def inverse(self) -> "Permutation":
        inv = [0] * self.n
        for i, target in enumerate(self.image):
            inv[target] = i
        return Permutation(tuple(inv))

    def compose(self, other: "Permutation") -> "Permutation":
        """
        Permutation whose action equals acting with `other` first and then
        with `self`: apply(apply(T, other), self) == apply(T, self.compose(other)).
        """
        if other.n != self.n:
            raise ShapeError(f"Cannot compose permutations of sizes {self.n} and {other.n}")
        return Permutation(tuple(other.image[i] for i in self.image))

    def as_array(self) -> np.ndarray:
        return np.asarray(self.image, dtype=np.intp)


def apply_permutation(tensor: DenseTensor, perm: Permutation) -> DenseTensor:
    """(pi * T)[j1..jk, c] = T[pi(j1)..pi(jk), c]; channels untouched"""
    if tensor.order == 0:
        return tensor
    if perm.n != tensor.n:
        raise ShapeError(f"Permutation of size {perm.n} does not act on mode size {tensor.n}")
    index = perm.as_array()
    out = tensor.data
    for axis in range(tensor.order):
        out = np.take(out, index, axis=axis)
    return DenseTensor(out)
