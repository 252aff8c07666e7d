# Invariant / equivariant linear bases and the affine layers built on them
from src.layers.basis import (
    Normalization,
    bias_basis_tensor,
    equivariant_basis_apply,
    invariant_basis_apply,
)
from src.layers.oracle import naive_oracle_apply
from src.layers.affine import (
    EquivariantLayerParams,
    InvariantLayerParams,
    affine_equivariant_apply,
    affine_invariant_apply,
)
