import numpy as np
import pytest

from src.features.distribution import DistributionConfig
from src.layers.basis import Normalization
from src.metrics.diagnostics import (
    CSV_HEADER,
    DiagnosticsRow,
    convergence_diagnostics,
    convergence_rate,
    diagnostics_csv,
)
from src.graphio.sbm import SbmParams, sbm_generate
from src.utils.errors import ArgumentError
from tests.conftest import empty_graph, path_graph


def sbm_pair():
    g1 = sbm_generate(SbmParams(n=12, communities=[12], p_in=0.4), 1, seed=1)[0]
    g2 = sbm_generate(SbmParams(n=12, communities=[6, 6], p_in=0.8, p_out=0.1), 1, seed=2)[0]
    return g1, g2


def test_zero_trials_gives_empty_table():
    assert convergence_diagnostics(path_graph(3), empty_graph(3), [4, 8], reference_M=16, trials=0) == []


def test_identical_graphs_need_explicit_epsilon():
    with pytest.raises(ArgumentError):
        convergence_diagnostics(path_graph(3), path_graph(3), [4], reference_M=16, trials=2)


def test_bounds_hold_on_small_run():
    g1, g2 = sbm_pair()
    config = DistributionConfig(k_max=2)
    rows = convergence_diagnostics(g1, g2, [16, 64], reference_M=4096, trials=40, seed=3, config=config)
    assert [r.M for r in rows] == [16, 64]
    for row in rows:
        assert row.delta_hat_M <= row.delta_M
        assert row.delta_hat_star <= row.delta_star
        assert 0.0 <= row.delta_clt <= 1.0
        assert row.variance <= 16 / row.M
    assert rows[0].epsilon == rows[1].epsilon > 0


def test_runs_are_reproducible_and_thread_independent():
    g1, g2 = path_graph(5), empty_graph(5)
    config = DistributionConfig(k_max=1)
    a = convergence_diagnostics(g1, g2, [8, 32], reference_M=512, trials=10, seed=9, config=config, workers=1)
    b = convergence_diagnostics(g1, g2, [8, 32], reference_M=512, trials=10, seed=9, config=config, workers=3)
    assert diagnostics_csv(a) == diagnostics_csv(b)


def test_csv_header():
    row = DiagnosticsRow(16, 0.1, 0.5, 0.05, 0.2, 0.01, 0.3, 0.02, 0.001)
    lines = diagnostics_csv([row]).splitlines()
    assert lines[0] == ",".join(CSV_HEADER) == "M,delta_hat_M,delta_M,delta_hat_star,delta_star,delta_clt,epsilon"
    assert lines[1] == "16,0.1,0.5,0.05,0.2,0.01,0.3"


def test_convergence_rate_of_exact_power_law():
    rows = [DiagnosticsRow(M, 0, 0, 0, 0, 0, 1.0, 3.0 / np.sqrt(M), 0) for M in (16, 64, 256, 1024)]
    assert convergence_rate(rows) == pytest.approx(-0.5, abs=1e-12)
    with pytest.raises(ArgumentError):
        convergence_rate(rows[:1])


@pytest.mark.slow
def test_concentration_and_rate_on_sbm_pair():
    g1, g2 = sbm_pair()
    grid = [16, 64, 256, 1024, 4096]
    rows = convergence_diagnostics(g1, g2, grid, reference_M=100_000, trials=500, seed=100, workers=4)
    assert [r.M for r in rows] == grid
    for row in rows:
        assert row.delta_hat_M <= row.delta_M
        assert row.delta_hat_star <= row.delta_star
        assert row.variance <= 16 / row.M
    assert -0.65 <= convergence_rate(rows) <= -0.35


@pytest.mark.slow
def test_bounds_below_one_with_explicit_epsilon():
    g1, g2 = sbm_pair()
    config = DistributionConfig(k_max=1, normalization=Normalization.SUM)
    rows = convergence_diagnostics(
        g1, g2, [1024, 4096], reference_M=20_000, trials=100, seed=7, epsilon=0.1, config=config, workers=4
    )
    assert rows[-1].delta_star == pytest.approx(16 / (4096 * 0.1**2))
    assert rows[-1].delta_star < 1.0
    for row in rows:
        assert row.epsilon == 0.1
        assert row.delta_hat_M <= row.delta_M
        assert row.delta_hat_star <= row.delta_star
        assert row.variance <= 16 / row.M
