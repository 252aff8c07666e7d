"""Single graph neural feature psi(g; w) = rho_i(H_k(rho_e(F_{2,k}(A_g))))"""

from typing import Union

import numpy as np

from src.features.distribution import DistributionConfig, FeatureParams
from src.features.engine import FeatureStack, GraphBasis, activation, evaluate_stack
from src.layers.affine import affine_equivariant_apply, affine_invariant_apply
from src.tensors.dense import DenseTensor
from src.tensors.graph import Graph, graph_to_tensor
from src.utils.errors import ShapeError


def _tensor(g: Union[Graph, DenseTensor], channels: int) -> DenseTensor:
    if isinstance(g, DenseTensor):
        if g.order != 2:
            raise ShapeError(f"Graph tensors are order 2, got order {g.order}")
        return g
    return graph_to_tensor(g, channels=channels)


def psi(g: Union[Graph, DenseTensor], w: FeatureParams, config: DistributionConfig = None) -> float:
    """Scalar feature value; permutation invariant, continuous in A_g"""
    config = config or DistributionConfig(channels=w.channels)
    tensor = _tensor(g, w.channels)
    stack = FeatureStack.from_params(w.k, [0], [w])
    basis = GraphBasis(tensor, config.normalization)
    return float(evaluate_stack(stack, basis, config.activation_e, config.activation_i)[0])


def psi_layered(g: Union[Graph, DenseTensor], w: FeatureParams, config: DistributionConfig = None) -> float:
    """psi through the public layer operations on full order-k tensors; slower reference path"""
    config = config or DistributionConfig(channels=w.channels)
    tensor = _tensor(g, w.channels)
    hidden = affine_equivariant_apply(w.theta_F, tensor, config.normalization)
    squashed = DenseTensor(activation(config.activation_e)(hidden.data))
    value = affine_invariant_apply(w.theta_H, squashed, config.normalization)
    return float(activation(config.activation_i)(np.float64(value)))
