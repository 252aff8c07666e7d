import networkx as nx
import numpy as np
import pytest

from src.features.distribution import DistributionConfig
from src.features.grnf import (
    GrnfMap,
    build_grnf,
    build_weighted_grnf,
    embed,
    embed_centered,
    embed_many,
    importance_weights,
    weighted_embed,
)
from src.metrics.bounds import embedding_dim_for
from src.tensors.graph import Graph, null_graph_tensor
from src.utils.errors import ArgumentError, ImportanceWeightError, ShapeError
from tests.conftest import path_graph, random_graph, random_permutation, star_graph
from tests.test_features import zero_feature


def test_build_is_deterministic():
    a, b = build_grnf(4, seed=7), build_grnf(4, seed=7)
    assert a.params == b.params
    np.testing.assert_array_equal(a.weights, b.weights)
    assert build_grnf(4, seed=8).params != a.params


def test_plain_weights():
    np.testing.assert_array_equal(build_grnf(4, seed=1).weights, [0.5] * 4)


def test_zero_dimension_is_rejected():
    with pytest.raises(ArgumentError):
        build_grnf(0)


def test_prefix_equals_smaller_build():
    big = build_grnf(64, seed=3)
    small = build_grnf(16, seed=3)
    assert big.prefix(16).params == small.params
    g = path_graph(5)
    np.testing.assert_array_equal(embed(big.prefix(16), g), embed(small, g))
    with pytest.raises(ArgumentError):
        big.prefix(65)


def test_embedding_invariance(rng):
    grnf = build_grnf(256, seed=2)
    for _ in range(10):
        n = int(rng.integers(2, 9))
        g = random_graph(rng, n)
        np.testing.assert_array_equal(embed(grnf, g.permute(random_permutation(rng, n))), embed(grnf, g))


def test_zero_parameter_map():
    M = 9
    grnf = GrnfMap(M, [zero_feature(k) for k in (1, 2, 3) * 3], np.full(M, 1 / 3), seed=0, config=DistributionConfig())
    np.testing.assert_allclose(embed(grnf, path_graph(4)), 0.5 / 3, rtol=0, atol=1e-15)


def test_components_are_bounded(rng):
    grnf = build_grnf(128, seed=4)
    z = embed(grnf, random_graph(rng, 6))
    assert np.all(z > 0) and np.all(z < 1 / np.sqrt(128))


def test_centered_null_graph_is_zero():
    grnf = build_grnf(32, seed=5)
    np.testing.assert_array_equal(embed_centered(grnf, null_graph_tensor()), np.zeros(32))
    np.testing.assert_array_equal(embed_centered(grnf, Graph.build(n=1, node_attrs=[[0.0]])), np.zeros(32))


def test_centering_cancels_in_distances(rng):
    grnf = build_grnf(64, seed=6)
    g1, g2 = random_graph(rng, 5), random_graph(rng, 7)
    plain = np.sum((embed(grnf, g1) - embed(grnf, g2)) ** 2)
    centered = np.sum((embed_centered(grnf, g1) - embed_centered(grnf, g2)) ** 2)
    assert plain == pytest.approx(centered, abs=1e-12)


def test_embed_many_is_independent_of_workers(rng):
    grnf = build_grnf(64, seed=7)
    graphs = [random_graph(rng, int(rng.integers(2, 8))) for _ in range(12)]
    serial = embed_many(grnf, graphs, workers=1)
    parallel = embed_many(grnf, graphs, workers=4)
    np.testing.assert_array_equal(serial, parallel)
    np.testing.assert_array_equal(serial[3], embed(grnf, graphs[3]))
    assert embed_many(grnf, []).shape == (0, 64)


def test_selected_dimension_builds():
    M = embedding_dim_for(0.1, 0.1)
    assert M == 16000
    assert build_grnf(M, DistributionConfig(k_max=1), seed=0).M == 16000


def test_weighted_with_identical_proposal_is_plain(rng):
    config = DistributionConfig()
    plain = build_grnf(64, config, seed=9)
    weighted = build_weighted_grnf(64, config, config, seed=9)
    np.testing.assert_array_equal(weighted.weights, plain.weights)
    g = random_graph(rng, 6)
    np.testing.assert_array_equal(weighted_embed(weighted, g), embed(plain, g))


def test_log_weights_are_finite():
    target = DistributionConfig(sigma=1.0)
    proposal = DistributionConfig(sigma=2.0)
    grnf = build_weighted_grnf(2000, target, proposal, seed=1)
    assert np.all(np.isfinite(grnf.weights)) and np.all(grnf.weights > 0)
    np.testing.assert_array_equal(importance_weights(grnf.params[:10], target, proposal), grnf.prefix(10).weights)


def test_weighted_requires_compatible_distributions():
    with pytest.raises(ImportanceWeightError):
        build_weighted_grnf(8, DistributionConfig(k_max=2), DistributionConfig(k_max=3))
    with pytest.raises(ImportanceWeightError):
        weighted_embed(build_grnf(4), path_graph(3))


def test_map_channel_mismatch(rng):
    grnf = build_grnf(8, DistributionConfig(channels=1))
    with pytest.raises(ShapeError):
        embed(grnf, random_graph(rng, 4, d_node=2))
    padded = build_grnf(8, DistributionConfig(channels=3))
    assert embed(padded, random_graph(rng, 4, d_node=2)).shape == (8,)


@pytest.mark.slow
def test_squared_distance_variance_bound():
    g1, g2 = path_graph(6), star_graph(6)
    grid = [16, 64, 256]
    samples = {M: [] for M in grid}
    for seed in range(500):
        grnf = build_grnf(max(grid), seed=seed)
        for M in grid:
            prefix = grnf.prefix(M)
            samples[M].append(np.sum((embed(prefix, g1) - embed(prefix, g2)) ** 2))
    variances = {M: np.var(values, ddof=1) for M, values in samples.items()}
    for M in grid:
        assert variances[M] <= 16 / M
    assert variances[256] < variances[16]


def _squared_differences(grnf, g1, g2):
    # per-feature (psi(g1) - psi(g2))^2 scaled by the map's weights
    return grnf.M * (embed(grnf, g1) - embed(grnf, g2)) ** 2


@pytest.mark.slow
def test_importance_sampled_distance_matches_plain():
    g1, g2 = path_graph(5), star_graph(5)
    target = DistributionConfig(k_max=1, sigma=1.0)
    proposal = DistributionConfig(k_max=1, sigma=2.0)

    weighted = np.array(
        [_squared_differences(build_weighted_grnf(64, target, proposal, seed=s), g1, g2).mean() for s in range(500)]
    )
    reference = _squared_differences(build_grnf(4096, target, seed=10_000), g1, g2)
    assert reference.mean() > 0
    stderr = np.sqrt(weighted.var(ddof=1) / weighted.size + reference.var(ddof=1) / reference.size)
    assert abs(weighted.mean() - reference.mean()) <= 2 * stderr
    assert stderr < reference.mean()


def _as_networkx(graph):
    nxg = nx.Graph()
    nxg.add_nodes_from(range(graph.n))
    nxg.add_edges_from(graph.edges)
    return nxg


@pytest.mark.slow
def test_separates_non_isomorphic_graphs(rng):
    pairs = []
    while len(pairs) < 100:
        n = int(rng.integers(2, 9))
        g1, g2 = random_graph(rng, n), random_graph(rng, n)
        if not nx.is_isomorphic(_as_networkx(g1), _as_networkx(g2)):
            pairs.append((g1, g2))
    grnf = build_grnf(1024, seed=0)
    distances = [np.linalg.norm(embed(grnf, g1) - embed(grnf, g2)) for g1, g2 in pairs]
    assert sum(d > 1e-6 for d in distances) >= 99

    for g1, _ in pairs:
        permuted = g1.permute(random_permutation(rng, g1.n))
        np.testing.assert_array_equal(embed(grnf, permuted), embed(grnf, g1))
