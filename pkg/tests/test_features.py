import numpy as np
import pytest

from src.features.distribution import DistributionConfig, FeatureParams, sample_parameter
from src.features.feature import psi, psi_layered
from src.layers.affine import EquivariantLayerParams, InvariantLayerParams
from src.tensors.graph import Graph
from src.tensors.partitions import bell
from tests.conftest import empty_graph, random_graph, random_permutation


def zero_feature(k, channels=1):
    return FeatureParams(
        k,
        EquivariantLayerParams(k, np.zeros(bell(k + 2) * channels), np.zeros(bell(k)), channels),
        InvariantLayerParams(k, np.zeros(bell(k)), 0.0),
    )


@pytest.mark.parametrize("k", [1, 2, 3])
def test_zero_parameters_give_one_half(rng, k):
    for n in (1, 3, 6):
        assert psi(random_graph(rng, n), zero_feature(k)) == 0.5


def test_invariance_is_exact(rng):
    config = DistributionConfig()
    for _ in range(100):
        n = int(rng.integers(2, 9))
        g = random_graph(rng, n, p=float(rng.uniform(0.2, 0.8)))
        w = sample_parameter(config, rng)
        assert psi(g.permute(random_permutation(rng, n)), w) == psi(g, w)


def test_invariance_with_attributes(rng):
    config = DistributionConfig(channels=3)
    for _ in range(20):
        g = random_graph(rng, 5, d_node=3, d_edge=2)
        w = sample_parameter(config, rng)
        assert psi(g.permute(random_permutation(rng, 5)), w, config) == psi(g, w, config)


def test_engine_matches_layer_composition(rng):
    config = DistributionConfig()
    for _ in range(30):
        g = random_graph(rng, int(rng.integers(1, 7)))
        w = sample_parameter(config, rng)
        assert psi(g, w, config) == pytest.approx(psi_layered(g, w, config), abs=1e-12)


@pytest.mark.parametrize("normalization", ["mean", "sum"])
def test_sigmoid_output_range(rng, normalization):
    config = DistributionConfig(normalization=normalization, sigma=3.0)
    for _ in range(50):
        value = psi(random_graph(rng, 5), sample_parameter(config, rng), config)
        assert 0.0 < value < 1.0


@pytest.mark.parametrize("activation", ["tanh", "relu"])
def test_other_invariant_activations(rng, activation):
    config = DistributionConfig(activation_i=activation)
    g = random_graph(rng, 4)
    w = sample_parameter(config, rng)
    value = psi(g, w, config)
    assert value == pytest.approx(psi_layered(g, w, config), abs=1e-12)
    if activation == "relu":
        assert value >= 0.0
    else:
        assert -1.0 < value < 1.0


def test_separation_witness():
    edge = Graph.build(n=2, edges=[(0, 1)])
    empty = empty_graph(2)
    config = DistributionConfig(k_max=1)
    rng = np.random.default_rng(0)
    for _ in range(100):
        w = sample_parameter(config, rng)
        if abs(psi(edge, w) - psi(empty, w)) > 1e-6:
            assert w.k == 1
            return
    pytest.fail("no separating feature found")
