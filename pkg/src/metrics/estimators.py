"""Distance and kernel estimators on GRNF embeddings"""

from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np

from src.features.grnf import GrnfMap, embed_many, embed_null
from src.utils.errors import ArgumentError, ShapeError


@dataclass(frozen=True)
class DistanceEstimate:
    value: float
    squared: float
    M: int

    def to_dict(self) -> dict:
        return {"value": self.value, "squared": self.squared, "M": self.M}


def _pair(z1, z2):
    a = np.asarray(z1, dtype=np.float64).reshape(-1)
    b = np.asarray(z2, dtype=np.float64).reshape(-1)
    if a.size != b.size:
        raise ShapeError(f"Embeddings have different lengths {a.size} and {b.size}")
    return a, b


def distance_estimate(z1, z2) -> DistanceEstimate:
    """||z1 - z2|| and its square; the square estimates d_P(g1, g2)^2 without bias"""
    a, b = _pair(z1, z2)
    diff = a - b
    squared = float(np.dot(diff, diff))
    return DistanceEstimate(value=float(np.sqrt(squared)), squared=squared, M=a.size)


def kernel_estimate(zc1, zc2) -> float:
    """Inner product of two centred embeddings"""
    a, b = _pair(zc1, zc2)
    return float(np.dot(a, b))


@dataclass(frozen=True, eq=False)
class GramMatrix:
    values: np.ndarray
    ids: List[str]

    @property
    def size(self) -> int:
        return self.values.shape[0]

    @property
    def min_eigenvalue(self) -> float:
        return float(np.linalg.eigvalsh(self.values).min())


def centered_embeddings(grnf: GrnfMap, graphs: Sequence, workers: int = 1) -> np.ndarray:
    return embed_many(grnf, graphs, workers) - embed_null(grnf)


def gram_from_embeddings(zc: np.ndarray, ids: Optional[Sequence[str]] = None) -> GramMatrix:
    if zc.shape[0] == 0:
        raise ArgumentError("Gram matrix needs at least one graph")
    K = zc @ zc.T
    K = 0.5 * (K + K.T)
    names = list(ids) if ids is not None else [str(i) for i in range(zc.shape[0])]
    return GramMatrix(values=K, ids=names)


def gram_matrix(grnf: GrnfMap, graphs: Sequence, ids: Optional[Sequence[str]] = None, workers: int = 1) -> GramMatrix:
    """Centred-kernel Gram matrix; symmetric and PSD up to rounding"""
    graphs = list(graphs)
    if not graphs:
        raise ArgumentError("Gram matrix needs at least one graph")
    return gram_from_embeddings(centered_embeddings(grnf, graphs, workers), ids)


def pairwise_squared_distances(Z: np.ndarray) -> np.ndarray:
    """Matrix of ||z_i - z_j||^2 over the rows of Z"""
    diff = Z[:, None, :] - Z[None, :, :]
    return np.einsum("ijm,ijm->ij", diff, diff)
