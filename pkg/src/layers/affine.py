"""
Affine invariant (H_k) and equivariant (F_{2,k}) layers

Coefficient layout: the coefficient of partition gamma and input channel c
sits at `gamma_index * channels + c`, with gamma_index the position of gamma
in `enumerate_partitions`.
"""

from dataclasses import dataclass

import numpy as np

from src.layers.basis import expand_basis, bias_basis_tensor, invariant_basis_apply, make_pools
from src.tensors.dense import DenseTensor
from src.tensors.partitions import bell, enumerate_partitions
from src.utils.errors import ShapeError


def _vector(values, expected: int, name: str) -> np.ndarray:
    arr = np.array(values, dtype=np.float64).reshape(-1)
    if arr.size != expected:
        raise ShapeError(f"{name} needs {expected} coefficients, got {arr.size}")
    if not np.all(np.isfinite(arr)):
        raise ShapeError(f"{name} coefficients must be finite")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class InvariantLayerParams:
    """H_k(T) = sum_gamma theta_gamma I_gamma T + bias"""

    k: int
    theta: np.ndarray
    bias: float
    channels: int = 1

    def __post_init__(self):
        object.__setattr__(self, "theta", _vector(self.theta, bell(self.k) * self.channels, "theta_H"))
        object.__setattr__(self, "bias", float(self.bias))
        if not np.isfinite(self.bias):
            raise ShapeError("Invariant bias must be finite")

    @property
    def size(self) -> int:
        return self.theta.size + 1


@dataclass(frozen=True, eq=False)
class EquivariantLayerParams:
    """F_{2,k}(A) = sum_gamma theta_gamma E_gamma A + sum_gamma' theta'_gamma' I_gamma'"""

    k: int
    theta_lin: np.ndarray
    theta_bias: np.ndarray
    channels: int = 1

    def __post_init__(self):
        object.__setattr__(self, "theta_lin", _vector(self.theta_lin, bell(self.k + 2) * self.channels, "theta_F"))
        object.__setattr__(self, "theta_bias", _vector(self.theta_bias, bell(self.k), "theta_F bias"))

    @property
    def size(self) -> int:
        return self.theta_lin.size + self.theta_bias.size


def affine_invariant_apply(params: InvariantLayerParams, tensor: DenseTensor, normalization="mean") -> float:
    if tensor.order != params.k:
        raise ShapeError(f"H_{params.k} cannot act on an order-{tensor.order} tensor")
    if tensor.channels != params.channels:
        raise ShapeError(f"H_{params.k} expects {params.channels} channels, got {tensor.channels}")
    d = params.channels
    acc = 0.0
    for gi, gamma in enumerate(enumerate_partitions(params.k)):
        values = invariant_basis_apply(gamma, tensor, normalization)
        for c in range(d):
            acc = acc + params.theta[gi * d + c] * values[c]
    return float(acc + params.bias)


def affine_equivariant_apply(params: EquivariantLayerParams, A: DenseTensor, normalization="mean") -> DenseTensor:
    """Single-channel order-k output; input channels are mixed by their own coefficients"""
    if A.order != 2:
        raise ShapeError(f"F_2,{params.k} acts on order-2 tensors, got order {A.order}")
    if A.channels != params.channels:
        raise ShapeError(f"F_2,{params.k} expects {params.channels} channels, got {A.channels}")
    k, d, n = params.k, params.channels, A.n
    pools = make_pools(A)
    out = np.zeros((n,) * k, dtype=np.float64)
    for gi, gamma in enumerate(enumerate_partitions(k + 2)):
        basis = expand_basis(gamma, A, k, normalization, pools)
        for c in range(d):
            out = out + params.theta_lin[gi * d + c] * basis[..., c]
    for gi, gamma in enumerate(enumerate_partitions(k)):
        out = out + params.theta_bias[gi] * bias_basis_tensor(gamma, k, n).data[..., 0]
    return DenseTensor(out[..., None])
