import os

import numpy as np
import pytest

from src.tensors.dense import DenseTensor, Permutation
from src.tensors.graph import Graph
from src.utils.settings import get_settings

FIXTURES = os.path.join(os.path.dirname(__file__), "fixtures")


@pytest.fixture(autouse=True)
def isolated_settings(monkeypatch):
    """Every test starts from default settings with run tracking off"""
    for name in ("GRNF_DATABASE_URL", "GRNF_ATTRIBUTE_BOUND", "GRNF_WORKERS", "GRNF_LOG_LEVEL"):
        monkeypatch.delenv(name, raising=False)
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def tracking_db(tmp_path, monkeypatch):
    url = f"sqlite:///{tmp_path / 'runs.db'}"
    monkeypatch.setenv("GRNF_DATABASE_URL", url)
    get_settings.cache_clear()
    return url


@pytest.fixture
def toy_tu_dir():
    return os.path.join(FIXTURES, "toy")


def random_graph(rng, n, p=0.5, d_node=0, d_edge=0, directed=False):
    pairs = [(i, j) for i in range(n) for j in range(n) if i != j and (directed or i < j)]
    edges = [e for e in pairs if rng.random() < p]
    return Graph.build(
        n=n,
        edges=edges,
        node_attrs=rng.uniform(-1, 1, size=(n, d_node)) if d_node else None,
        edge_attrs=rng.uniform(-1, 1, size=(len(edges), d_edge)) if d_edge and edges else None,
        directed=directed,
    )


def random_tensor(rng, n, order=2, channels=1):
    return DenseTensor(rng.normal(size=(n,) * order + (channels,)))


def random_permutation(rng, n):
    return Permutation.random(n, rng)


def path_graph(n):
    return Graph.build(n=n, edges=[(i, i + 1) for i in range(n - 1)])


def empty_graph(n):
    return Graph.build(n=n, edges=[])


def star_graph(n):
    return Graph.build(n=n, edges=[(0, i) for i in range(1, n)])
