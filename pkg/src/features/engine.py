"""
Batched evaluation of graph neural features

For one graph the equivariant basis outputs do not depend on the feature
parameters, so they are computed once (`GraphBasis`) and shared by every
feature of every map. Each E_gamma A is non-zero only on the index tuples
whose pattern equals gamma's output pattern; features are therefore
evaluated pattern by pattern on those compact segments, and the invariant
layer's pooling over a pattern is exactly a pooling over one segment.

The arithmetic (term order, sorted pooling) is the same as in
`affine_equivariant_apply` / `affine_invariant_apply`, so a feature
evaluated here equals the composition of the public layers.
"""

from dataclasses import dataclass
from typing import Callable, Dict, List, Tuple

import numpy as np
from scipy.special import expit

from src.layers.basis import (
    Normalization,
    equivariant_layout,
    equivariant_segment,
    falling_factorial,
    make_pools,
    sorted_sum,
)
from src.tensors.dense import DenseTensor
from src.tensors.partitions import enumerate_partitions
from src.utils.errors import ShapeError

CHUNK_ROWS = 512


def relu(x: np.ndarray) -> np.ndarray:
    return np.maximum(x, 0.0)


ACTIVATIONS = {
    "sigmoid": expit,
    "tanh": np.tanh,
    "relu": relu,
}


def activation(name) -> Callable[[np.ndarray], np.ndarray]:
    return ACTIVATIONS[getattr(name, "value", name)]


class GraphBasis:
    """Equivariant basis segments of one graph tensor, grouped by output pattern"""

    def __init__(self, tensor: DenseTensor, normalization="mean"):
        if tensor.order != 2:
            raise ShapeError(f"Graph tensors are order 2, got order {tensor.order}")
        self.tensor = tensor
        self.normalization = Normalization(normalization)
        self._pools = make_pools(tensor)
        self._segments: Dict[int, List[List[Tuple[int, np.ndarray]]]] = {}

    @property
    def n(self) -> int:
        return self.tensor.n

    @property
    def channels(self) -> int:
        return self.tensor.channels

    def segments(self, k: int) -> List[List[Tuple[int, np.ndarray]]]:
        """segments(k)[p] = [(gamma_index, values of shape (count_p, d)), ...] for output pattern p"""
        if k not in self._segments:
            patterns = enumerate_partitions(k)
            position = {p.rgs: i for i, p in enumerate(patterns)}
            groups: List[List[Tuple[int, np.ndarray]]] = [[] for _ in patterns]
            for gi, gamma in enumerate(enumerate_partitions(k + 2)):
                layout = equivariant_layout(gamma.rgs)
                values = equivariant_segment(gamma, self.tensor, k, self.normalization, self._pools)
                groups[position[layout.output.rgs]].append((gi, values))
            self._segments[k] = groups
        return self._segments[k]


@dataclass(frozen=True)
class FeatureStack:
    """Coefficients of all features of one tensor order, one row per feature"""

    k: int
    positions: np.ndarray  # index of each row inside its map
    theta_lin: np.ndarray  # (rows, Bell(k+2) * d)
    theta_bias: np.ndarray  # (rows, Bell(k))
    theta_h: np.ndarray  # (rows, Bell(k))
    bias_h: np.ndarray  # (rows,)

    @property
    def rows(self) -> int:
        return self.positions.size

    @classmethod
    def from_params(cls, k: int, positions, params) -> "FeatureStack":
        return cls(
            k=k,
            positions=np.asarray(positions, dtype=np.intp),
            theta_lin=np.stack([p.theta_F.theta_lin for p in params]),
            theta_bias=np.stack([p.theta_F.theta_bias for p in params]),
            theta_h=np.stack([p.theta_H.theta for p in params]),
            bias_h=np.array([p.theta_H.bias for p in params], dtype=np.float64),
        )


def evaluate_stack(stack: FeatureStack, basis: GraphBasis, activation_e="sigmoid", activation_i="sigmoid") -> np.ndarray:
    """psi values of every feature in the stack on one graph, shape (rows,)"""
    rho_e, rho_i = activation(activation_e), activation(activation_i)
    d = basis.channels
    if stack.theta_lin.shape[1] % d:
        raise ShapeError(f"Map coefficients do not match a {d}-channel graph tensor")
    if stack.theta_lin.shape[1] // d != len(enumerate_partitions(stack.k + 2)):
        raise ShapeError(f"Map expects {stack.theta_lin.shape[1]} coefficients, graph tensor has {d} channels")
    segments = basis.segments(stack.k)
    patterns = enumerate_partitions(stack.k)
    mean = basis.normalization is Normalization.MEAN
    out = np.empty(stack.rows, dtype=np.float64)

    for start in range(0, stack.rows, CHUNK_ROWS):
        rows = slice(start, min(start + CHUNK_ROWS, stack.rows))
        lin = stack.theta_lin[rows]
        acc = np.zeros(lin.shape[0], dtype=np.float64)
        for pi, pattern in enumerate(patterns):
            count = falling_factorial(basis.n, pattern.blocks)
            if count == 0:
                pooled = np.zeros(lin.shape[0], dtype=np.float64)
            else:
                F = np.zeros((lin.shape[0], count), dtype=np.float64)
                for gi, values in segments[pi]:
                    for c in range(d):
                        F = F + lin[:, gi * d + c, None] * values[None, :, c]
                F = F + stack.theta_bias[rows, pi, None]
                pooled = sorted_sum(rho_e(F), axis=1)
                if mean:
                    pooled = pooled / count
            acc = acc + stack.theta_h[rows, pi] * pooled
        out[rows] = rho_i(acc + stack.bias_h[rows])
    return out
