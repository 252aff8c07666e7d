"""
Graph Random Neural Features: z(g; W) = [weight_m * psi(g; w_m)]_m

Parameters are drawn sequentially from one seeded generator at build time,
so a map is fully determined by (M, config, seed) and the first M' features
of a map equal `build_grnf(M', config, seed)`. Evaluation never touches a
random generator.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from src.features.distribution import (
    DistributionConfig,
    FeatureParams,
    ParameterSampler,
    log_density,
    truncated_tail,
)
from src.features.engine import FeatureStack, GraphBasis, evaluate_stack
from src.tensors.dense import DenseTensor
from src.tensors.graph import Graph, graph_to_tensor, null_graph_tensor
from src.utils.errors import ArgumentError, ImportanceWeightError, ShapeError

logger = logging.getLogger(__name__)

GraphLike = Union[Graph, DenseTensor]


@dataclass(frozen=True, eq=False)
class GrnfMap:
    """Embedding map; `proposal` is set for importance-weighted maps"""

    M: int
    params: Tuple[FeatureParams, ...]
    weights: np.ndarray
    seed: int
    config: DistributionConfig
    proposal: Optional[DistributionConfig] = None

    def __post_init__(self):
        object.__setattr__(self, "params", tuple(self.params))
        weights = np.array(self.weights, dtype=np.float64).reshape(-1)
        if self.M < 1:
            raise ArgumentError(f"Embedding dimension must be positive, got {self.M}")
        if len(self.params) != self.M or weights.size != self.M:
            raise ShapeError(f"Map of dimension {self.M} has {len(self.params)} parameters and {weights.size} weights")
        if not np.all(np.isfinite(weights)) or np.any(weights <= 0):
            raise ImportanceWeightError("Map weights must be finite and positive")
        if any(p.channels != self.config.channels for p in self.params):
            raise ShapeError(f"Every feature of the map must read {self.config.channels} channels")
        weights.setflags(write=False)
        object.__setattr__(self, "weights", weights)

    @property
    def weighted(self) -> bool:
        return self.proposal is not None

    @cached_property
    def stacks(self) -> List[FeatureStack]:
        by_order: Dict[int, List[int]] = {}
        for position, w in enumerate(self.params):
            by_order.setdefault(w.k, []).append(position)
        return [
            FeatureStack.from_params(k, positions, [self.params[i] for i in positions])
            for k, positions in sorted(by_order.items())
        ]

    def prefix(self, M: int) -> "GrnfMap":
        """The map made of the first M features; equals building with M directly"""
        if M < 1 or M > self.M:
            raise ArgumentError(f"Prefix dimension must be in 1..{self.M}, got {M}")
        params = self.params[:M]
        if self.weighted:
            weights = importance_weights(params, self.config, self.proposal)
        else:
            weights = plain_weights(M)
        return GrnfMap(M, params, weights, self.seed, self.config, self.proposal)

    def tensor_for(self, g: GraphLike) -> DenseTensor:
        if isinstance(g, DenseTensor):
            if g.order != 2 or g.channels != self.config.channels:
                raise ShapeError(f"Map reads order-2 tensors with {self.config.channels} channels")
            return g
        return graph_to_tensor(g, channels=self.config.channels)

    def feature_values(self, g: GraphLike) -> np.ndarray:
        """Unweighted psi(g; w_m) for every feature"""
        basis = GraphBasis(self.tensor_for(g), self.config.normalization)
        values = np.empty(self.M, dtype=np.float64)
        for stack in self.stacks:
            values[stack.positions] = evaluate_stack(
                stack, basis, self.config.activation_e, self.config.activation_i
            )
        return values

    def __repr__(self) -> str:
        kind = "weighted" if self.weighted else "plain"
        return f"GrnfMap(M={self.M}, seed={self.seed}, {kind})"


def plain_weights(M: int) -> np.ndarray:
    return np.full(M, np.sqrt(1.0 / M), dtype=np.float64)


def _sample(M: int, config: DistributionConfig, seed: int) -> Tuple[FeatureParams, ...]:
    sampler = ParameterSampler(config, np.random.default_rng(seed))
    return tuple(sampler.draw() for _ in range(M))


def build_grnf(M: int, config: Optional[DistributionConfig] = None, seed: int = 0) -> GrnfMap:
    """Sample M features i.i.d. from P; all weights 1/sqrt(M)"""
    config = config or DistributionConfig()
    if M < 1:
        raise ArgumentError(f"Embedding dimension must be positive, got {M}")
    tail = truncated_tail(config)
    logger.info(f"🚀 Building GRNF map M={M} seed={seed} k_max={config.k_max}, truncated tail mass {tail:.3e}")
    return GrnfMap(M, _sample(M, config, seed), plain_weights(M), seed, config)


def _check_compatible(target: DistributionConfig, proposal: DistributionConfig) -> None:
    for field in ("k_max", "channels", "activation_e", "activation_i", "normalization"):
        if getattr(target, field) != getattr(proposal, field):
            raise ImportanceWeightError(f"Target and proposal distributions differ in {field}")


def importance_weights(
    params: Sequence[FeatureParams], target: DistributionConfig, proposal: DistributionConfig
) -> np.ndarray:
    """weights[m] = sqrt(p(w_m) / (M * pbar(w_m))), computed in log space"""
    M = len(params)
    weights = np.empty(M, dtype=np.float64)
    for m, w in enumerate(params):
        log_p, log_q = log_density(w, target), log_density(w, proposal)
        if not np.isfinite(log_q):
            raise ImportanceWeightError(f"Proposal density vanishes at feature {m}")
        if not np.isfinite(log_p):
            raise ImportanceWeightError(f"Target density vanishes at feature {m}")
        weights[m] = np.sqrt(np.exp(log_p - log_q) / M)
    if not np.all(np.isfinite(weights)) or np.any(weights <= 0):
        raise ImportanceWeightError("Importance weights over- or underflowed")
    return weights


def build_weighted_grnf(
    M: int, target: DistributionConfig, proposal: DistributionConfig, seed: int = 0
) -> GrnfMap:
    """Sample from the proposal pbar and reweight towards the target p"""
    if M < 1:
        raise ArgumentError(f"Embedding dimension must be positive, got {M}")
    _check_compatible(target, proposal)
    params = _sample(M, proposal, seed)
    logger.info(f"🚀 Building weighted GRNF map M={M} seed={seed} sigma {target.sigma} <- {proposal.sigma}")
    return GrnfMap(M, params, importance_weights(params, target, proposal), seed, target, proposal)


def embed(grnf: GrnfMap, g: GraphLike) -> np.ndarray:
    """z(g) = weights * psi(g; w); invariant to node relabeling"""
    return grnf.weights * grnf.feature_values(g)


def weighted_embed(grnf: GrnfMap, g: GraphLike) -> np.ndarray:
    """Importance-weighted embedding of a map built by `build_weighted_grnf`"""
    if not grnf.weighted:
        raise ImportanceWeightError("Map carries no proposal distribution; use embed()")
    return embed(grnf, g)


def embed_null(grnf: GrnfMap) -> np.ndarray:
    return embed(grnf, null_graph_tensor(grnf.config.channels))


def embed_centered(grnf: GrnfMap, g: GraphLike, null: Optional[np.ndarray] = None) -> np.ndarray:
    """z(g) - z(0_g), the feature map of the centred kernel"""
    reference = embed_null(grnf) if null is None else null
    return embed(grnf, g) - reference


def embed_many(grnf: GrnfMap, graphs: Iterable[GraphLike], workers: int = 1) -> np.ndarray:
    """Embeddings of a list of graphs as rows of an (S, M) matrix; independent of `workers`"""
    graphs = list(graphs)
    if not graphs:
        return np.zeros((0, grnf.M), dtype=np.float64)
    if workers <= 1 or len(graphs) == 1:
        rows = [embed(grnf, g) for g in graphs]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(lambda g: embed(grnf, g), graphs))
    return np.stack(rows)
