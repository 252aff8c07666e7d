# Estimators, dimension bounds and concentration diagnostics
from src.metrics.estimators import (
    DistanceEstimate,
    GramMatrix,
    distance_estimate,
    gram_matrix,
    kernel_estimate,
)
from src.metrics.bounds import delta_bounds, embedding_dim_for
from src.metrics.diagnostics import convergence_diagnostics, convergence_rate

__all__ = [
    "DistanceEstimate",
    "GramMatrix",
    "distance_estimate",
    "gram_matrix",
    "kernel_estimate",
    "delta_bounds",
    "embedding_dim_for",
    "convergence_diagnostics",
    "convergence_rate",
]
