"""
Attributed graphs and their order-2 tensor representation
"""

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Tuple

import numpy as np

from src.tensors.dense import DenseTensor, Permutation
from src.utils.errors import GraphValidationError, ShapeError
from src.utils.settings import get_settings


def _as_matrix(values, rows: int, name: str) -> np.ndarray:
    if values is None:
        return np.zeros((rows, 0), dtype=np.float64)
    arr = np.asarray(values, dtype=np.float64)
    if arr.size == 0 and rows == 0:
        return np.zeros((0, arr.shape[1] if arr.ndim == 2 else 0), dtype=np.float64)
    if arr.ndim == 1 and rows == arr.shape[0]:
        arr = arr.reshape(rows, 1)
    if arr.ndim != 2 or arr.shape[0] != rows:
        raise GraphValidationError(f"{name} must have one row per item ({rows}), got shape {arr.shape}")
    return arr


@dataclass(frozen=True, eq=False)
class Graph:
    """
    Graph (V, E, at) with bounded real-vector attributes on nodes and edges.

    Instances are canonical: undirected edges are stored once as (i, j) with
    i < j and edges are sorted, so structural equality is array equality.
    Use `Graph.build` to construct from arbitrary edge lists.
    """

    n: int
    node_attrs: np.ndarray
    edges: Tuple[Tuple[int, int], ...]
    edge_attrs: np.ndarray
    directed: bool = False
    attribute_bound: Optional[float] = None

    def __post_init__(self):
        if self.n < 1:
            raise GraphValidationError(f"A graph needs at least one node, got n={self.n}")
        node_attrs = _as_matrix(self.node_attrs, self.n, "node_attrs")
        edges = tuple((int(i), int(j)) for i, j in self.edges)
        edge_attrs = _as_matrix(self.edge_attrs, len(edges), "edge_attrs")
        bound = self.attribute_bound if self.attribute_bound is not None else get_settings().attribute_bound

        seen = set()
        for i, j in edges:
            if not (0 <= i < self.n and 0 <= j < self.n):
                raise GraphValidationError(f"Edge ({i}, {j}) references a node outside 0..{self.n - 1}")
            if i == j:
                raise GraphValidationError(f"Self-loop on node {i} is not allowed")
            if not self.directed and i > j:
                raise GraphValidationError(f"Undirected edge ({i}, {j}) must be stored with i < j")
            if (i, j) in seen:
                raise GraphValidationError(f"Duplicate edge ({i}, {j})")
            seen.add((i, j))
        for name, arr in (("node", node_attrs), ("edge", edge_attrs)):
            if arr.size and not np.all(np.isfinite(arr)):
                raise GraphValidationError(f"Non-finite {name} attribute")
            if arr.size and np.max(np.abs(arr)) > bound:
                raise GraphValidationError(f"{name.title()} attribute magnitude exceeds the bound B={bound}")

        node_attrs.setflags(write=False)
        edge_attrs.setflags(write=False)
        object.__setattr__(self, "node_attrs", node_attrs)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "edge_attrs", edge_attrs)
        object.__setattr__(self, "attribute_bound", bound)

    @classmethod
    def build(
        cls,
        n: int,
        edges: Iterable[Sequence[int]] = (),
        node_attrs=None,
        edge_attrs=None,
        directed: bool = False,
        attribute_bound: Optional[float] = None,
    ) -> "Graph":
        """Normalize an edge list (orientation for undirected graphs, sorting) and validate"""
        edges = [(int(e[0]), int(e[1])) for e in edges]
        eattrs = _as_matrix(edge_attrs, len(edges), "edge_attrs")
        if not directed:
            edges = [(min(i, j), max(i, j)) for i, j in edges]
        order = sorted(range(len(edges)), key=lambda idx: edges[idx])
        return cls(
            n=n,
            node_attrs=_as_matrix(node_attrs, n, "node_attrs"),
            edges=tuple(edges[idx] for idx in order),
            edge_attrs=eattrs[order] if len(order) else eattrs,
            directed=directed,
            attribute_bound=attribute_bound,
        )

    @property
    def d_node(self) -> int:
        return self.node_attrs.shape[1]

    @property
    def d_edge(self) -> int:
        return self.edge_attrs.shape[1]

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def permute(self, perm: Permutation) -> "Graph":
        """
        Relabel nodes so that new node j is old node perm(j); then
        graph_to_tensor(g.permute(p)) == apply_permutation(graph_to_tensor(g), p).
        """
        if perm.n != self.n:
            raise ShapeError(f"Permutation of size {perm.n} does not act on a {self.n}-node graph")
        inverse = perm.inverse().image
        return Graph.build(
            n=self.n,
            edges=[(inverse[i], inverse[j]) for i, j in self.edges],
            node_attrs=self.node_attrs[perm.as_array()],
            edge_attrs=self.edge_attrs,
            directed=self.directed,
            attribute_bound=self.attribute_bound,
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return (
            self.n == other.n
            and self.directed == other.directed
            and self.edges == other.edges
            and np.array_equal(self.node_attrs, other.node_attrs)
            and np.array_equal(self.edge_attrs, other.edge_attrs)
        )

    __hash__ = None


def graph_to_tensor(graph: Graph, channels: Optional[int] = None) -> DenseTensor:
    """
    Order-2 representation A_g: node attributes on the diagonal, edge
    attributes off the diagonal, zero-padded to d = max(d_node, d_edge, 1)
    channels (or to `channels` when given). Nodes without attributes carry
    1.0 in channel 0 on the diagonal; edges without attributes carry 1.0 in
    channel 0, i.e. a binary adjacency.
    """
    natural = max(graph.d_node, graph.d_edge, 1)
    d = natural if channels is None else channels
    if d < natural:
        raise ShapeError(f"Graph needs {natural} channels but only {d} were requested")

    A = np.zeros((graph.n, graph.n, d), dtype=np.float64)
    diag = np.arange(graph.n)
    if graph.d_node:
        A[diag, diag, : graph.d_node] = graph.node_attrs
    else:
        A[diag, diag, 0] = 1.0

    if graph.edges:
        src = np.array([e[0] for e in graph.edges], dtype=np.intp)
        dst = np.array([e[1] for e in graph.edges], dtype=np.intp)
        if graph.d_edge:
            A[src, dst, : graph.d_edge] = graph.edge_attrs
            if not graph.directed:
                A[dst, src, : graph.d_edge] = graph.edge_attrs
        else:
            A[src, dst, 0] = 1.0
            if not graph.directed:
                A[dst, src, 0] = 1.0
    return DenseTensor(A)


def null_graph_tensor(channels: int = 1) -> DenseTensor:
    """Tensor of the null graph 0_g: a single node whose attribute is zero"""
    if channels < 1:
        raise ShapeError("Channel count must be positive")
    return DenseTensor(np.zeros((1, 1, channels), dtype=np.float64))
