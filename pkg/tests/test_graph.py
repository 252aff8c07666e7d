import numpy as np
import pytest

from src.tensors.dense import Permutation, apply_permutation
from src.tensors.graph import Graph, graph_to_tensor, null_graph_tensor
from src.utils.errors import GraphValidationError, ShapeError
from tests.conftest import random_graph


def test_build_normalizes_edges():
    g = Graph.build(n=3, edges=[(2, 0), (1, 0)])
    assert g.edges == ((0, 1), (0, 2))


@pytest.mark.parametrize(
    "edges",
    [[(0, 0)], [(0, 3)], [(0, 1), (1, 0)]],
    ids=["self-loop", "out-of-range", "duplicate"],
)
def test_invalid_edges(edges):
    with pytest.raises(GraphValidationError):
        Graph.build(n=3, edges=edges)


def test_invalid_attributes():
    with pytest.raises(GraphValidationError):
        Graph.build(n=2, node_attrs=[[np.inf], [0.0]])
    with pytest.raises(GraphValidationError):
        Graph.build(n=2, node_attrs=[[11.0], [0.0]])
    with pytest.raises(GraphValidationError):
        Graph.build(n=2, node_attrs=[[1.0]])
    with pytest.raises(GraphValidationError):
        Graph.build(n=0)


def test_attribute_bound_from_settings(monkeypatch):
    from src.utils.settings import get_settings

    monkeypatch.setenv("GRNF_ATTRIBUTE_BOUND", "100")
    get_settings.cache_clear()
    g = Graph.build(n=1, node_attrs=[[50.0]])
    assert g.attribute_bound == 100.0


def test_unattributed_tensor():
    g = Graph.build(n=3, edges=[(0, 1)])
    A = graph_to_tensor(g).data[..., 0]
    np.testing.assert_array_equal(A, [[1, 1, 0], [1, 1, 0], [0, 0, 1]])


def test_attributed_tensor_and_padding():
    g = Graph.build(n=2, edges=[(0, 1)], node_attrs=[[0.5, -0.5], [1.0, 2.0]], edge_attrs=[[3.0]])
    T = graph_to_tensor(g)
    assert T.channels == 2
    np.testing.assert_array_equal(T.data[0, 0], [0.5, -0.5])
    np.testing.assert_array_equal(T.data[0, 1], [3.0, 0.0])
    np.testing.assert_array_equal(T.data[1, 0], [3.0, 0.0])
    padded = graph_to_tensor(g, channels=4)
    assert padded.channels == 4
    np.testing.assert_array_equal(padded.data[..., :2], T.data)
    with pytest.raises(ShapeError):
        graph_to_tensor(g, channels=1)


def test_edges_without_attributes_on_attributed_nodes():
    g = Graph.build(n=2, edges=[(0, 1)], node_attrs=[[4.0, 5.0], [6.0, 7.0]])
    T = graph_to_tensor(g)
    np.testing.assert_array_equal(T.data[0, 1], [1.0, 0.0])


def test_directed_tensor_is_not_symmetrized():
    g = Graph.build(n=2, edges=[(1, 0)], directed=True)
    A = graph_to_tensor(g).data[..., 0]
    assert A[1, 0] == 1.0 and A[0, 1] == 0.0


def test_permute_matches_tensor_action(rng):
    for _ in range(20):
        g = random_graph(rng, 6, d_node=2, d_edge=1)
        p = Permutation.random(6, rng)
        assert graph_to_tensor(g.permute(p)) == apply_permutation(graph_to_tensor(g), p)


def test_structural_equality(rng):
    g = random_graph(rng, 5)
    assert g == g.permute(Permutation.identity(5))
    assert g != Graph.build(n=5, edges=[])


def test_null_graph_tensor():
    T = null_graph_tensor(3)
    assert T.data.shape == (1, 1, 3)
    assert not T.data.any()
