"""
Bowyer-Watson Delaunay triangulation and the Delaunay graph generator

Points are mapped to the unit box before triangulating and inserted in
lexicographic coordinate order, so the triangulation does not depend on
the order of the input list. Cocircular ties are resolved by that
insertion order.
"""

import logging
from typing import List, Optional, Sequence, Set, Tuple

import numpy as np
from pydantic import BaseModel, Field, model_validator

from src.tensors.graph import Graph
from src.utils.errors import ArgumentError
from src.utils.seeds import derive_seed

logger = logging.getLogger(__name__)

EPS = 1e-12
DUPLICATE_JITTER = 1e-9
SUPER_RADIUS = 100.0

Triangle = Tuple[int, int, int]


class DelaunayParams(BaseModel):
    points_per_graph: int = Field(default=12, ge=3)
    seeds_per_class: int = Field(default=6, ge=1, description="Seed points drawn when none are given")
    seed_points: Optional[List[Tuple[float, float]]] = None
    noise_sigma: float = Field(default=1.0, ge=0)
    box: Tuple[float, float] = (0.0, 10.0)

    @model_validator(mode="after")
    def check_box(self):
        low, high = self.box
        if not high > low:
            raise ValueError("Coordinate box must have high > low")
        if self.seed_points is not None and not self.seed_points:
            raise ValueError("seed_points must not be empty")
        return self


def _orientation(a: np.ndarray, b: np.ndarray, c: np.ndarray) -> float:
    return float((b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]))


def _in_circumcircle(a: np.ndarray, b: np.ndarray, c: np.ndarray, d: np.ndarray) -> bool:
    """True when d is strictly inside the circumcircle of the counter-clockwise triangle abc"""
    rows = np.array([a - d, b - d, c - d])
    lifted = np.column_stack([rows, (rows ** 2).sum(axis=1)])
    return float(np.linalg.det(lifted)) > EPS


def _deduplicate(points: np.ndarray) -> np.ndarray:
    out = points.copy()
    seen = {}
    for i, p in enumerate(points):
        key = (float(p[0]), float(p[1]))
        repeats = seen.get(key, 0)
        if repeats:
            out[i] = p + DUPLICATE_JITTER * repeats
        seen[key] = repeats + 1
    return out


def delaunay_triangles(points: Sequence[Sequence[float]]) -> List[Triangle]:
    """Triangles of the Delaunay triangulation as sorted index triples"""
    pts = np.asarray(points, dtype=np.float64)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise ArgumentError("Triangulation needs 2-d points")
    if pts.shape[0] < 3:
        raise ArgumentError(f"Triangulation needs at least 3 points, got {pts.shape[0]}")
    pts = _deduplicate(pts)
    low = pts.min(axis=0)
    span = float(np.max(pts.max(axis=0) - low)) or 1.0
    unit = (pts - low) / span

    n = unit.shape[0]
    center = np.array([0.5, 0.5])
    r = SUPER_RADIUS
    super_vertices = np.array([
        center + [-r * np.sqrt(3.0), -r],
        center + [r * np.sqrt(3.0), -r],
        center + [0.0, 2.0 * r],
    ])
    vertices = np.vstack([unit, super_vertices])
    triangles: List[Triangle] = [(n, n + 1, n + 2)]

    for p in sorted(range(n), key=lambda i: (unit[i, 0], unit[i, 1], i)):
        point = vertices[p]
        bad = [t for t in triangles if _in_circumcircle(vertices[t[0]], vertices[t[1]], vertices[t[2]], point)]
        edge_count = {}
        for t in bad:
            for e in ((t[0], t[1]), (t[1], t[2]), (t[2], t[0])):
                key = (min(e), max(e))
                edge_count[key] = edge_count.get(key, 0) + 1
        bad_set = set(bad)
        triangles = [t for t in triangles if t not in bad_set]
        for t in bad:
            for u, v in ((t[0], t[1]), (t[1], t[2]), (t[2], t[0])):
                if edge_count[(min(u, v), max(u, v))] != 1:
                    continue
                if _orientation(vertices[u], vertices[v], point) > 0:
                    triangles.append((u, v, p))
                else:
                    triangles.append((v, u, p))

    result = sorted(
        tuple(sorted(t))
        for t in triangles
        if max(t) < n and abs(_orientation(vertices[t[0]], vertices[t[1]], vertices[t[2]])) > EPS
    )
    return [(int(a), int(b), int(c)) for a, b, c in result]


def _collinear_path(pts: np.ndarray) -> Set[Tuple[int, int]]:
    order = sorted(range(pts.shape[0]), key=lambda i: (pts[i, 0], pts[i, 1], i))
    return {(min(a, b), max(a, b)) for a, b in zip(order, order[1:])}


def delaunay_triangulation(points: Sequence[Sequence[float]]) -> Set[Tuple[int, int]]:
    """Unique undirected edges (i < j) of the Delaunay triangulation"""
    triangles = delaunay_triangles(points)
    if not triangles:
        return _collinear_path(np.asarray(points, dtype=np.float64))
    edges = set()
    for a, b, c in triangles:
        edges.update({(a, b), (a, c), (b, c)})
    return edges


def class_seed_points(params: DelaunayParams, seed: int) -> np.ndarray:
    """Seed points of a class: the given ones, or drawn uniformly in the box"""
    if params.seed_points is not None:
        return np.asarray(params.seed_points, dtype=np.float64)
    low, high = params.box
    rng = np.random.default_rng(derive_seed(seed, "seed-points"))
    return rng.uniform(low, high, size=(params.seeds_per_class, 2))


def delaunay_generate(params: DelaunayParams, count: int, seed: int = 0) -> List[Graph]:
    """
    Graphs whose node i sits at seed point (i mod s) plus Gaussian noise,
    clipped to the box; topology is the Delaunay triangulation and the
    coordinates are the node attributes.
    """
    seeds = class_seed_points(params, seed)
    low, high = params.box
    base = seeds[np.arange(params.points_per_graph) % seeds.shape[0]]
    graphs = []
    for i in range(count):
        rng = np.random.default_rng(derive_seed(seed, "graph", i))
        points = np.clip(base + rng.normal(0.0, params.noise_sigma, size=base.shape), low, high)
        edges = sorted(delaunay_triangulation(points))
        graphs.append(Graph.build(n=params.points_per_graph, edges=edges, node_attrs=points))
    logger.info(f"✅ Generated {count} Delaunay graphs with {params.points_per_graph} nodes")
    return graphs
