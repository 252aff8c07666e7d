"""Stochastic block model graph generator"""

import logging
from typing import List

import networkx as nx
import numpy as np
from pydantic import BaseModel, Field, model_validator

from src.tensors.graph import Graph
from src.utils.seeds import derive_seed

logger = logging.getLogger(__name__)


class SbmParams(BaseModel):
    n: int = Field(default=12, ge=1, description="Nodes per graph")
    communities: List[int] = Field(default_factory=lambda: [12], description="Block sizes")
    p_in: float = Field(default=0.4, ge=0, le=1, description="Within-block edge probability")
    p_out: float = Field(default=0.0, ge=0, le=1, description="Between-block edge probability")

    @model_validator(mode="after")
    def blocks_cover_nodes(self):
        if not self.communities or any(size < 1 for size in self.communities):
            raise ValueError("Block sizes must be positive")
        if sum(self.communities) != self.n:
            raise ValueError(f"Block sizes sum to {sum(self.communities)}, expected n={self.n}")
        return self

    def probability_matrix(self) -> List[List[float]]:
        blocks = len(self.communities)
        p = np.full((blocks, blocks), self.p_out)
        np.fill_diagonal(p, self.p_in)
        return p.tolist()


def sbm_generate(params: SbmParams, count: int, seed: int = 0) -> List[Graph]:
    """Undirected unattributed SBM graphs; graph i uses a seed derived from (seed, i)"""
    graphs = []
    probabilities = params.probability_matrix()
    for i in range(count):
        sample = nx.stochastic_block_model(
            params.communities, probabilities, seed=derive_seed(seed, "graph", i), directed=False, selfloops=False
        )
        graphs.append(Graph.build(n=params.n, edges=list(sample.edges())))
    logger.info(f"✅ Generated {count} SBM graphs, blocks {params.communities}, p_in={params.p_in}, p_out={params.p_out}")
    return graphs
