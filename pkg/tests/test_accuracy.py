import numpy as np
import pytest
from pydantic import ValidationError

from src.experiments.accuracy import CSV_HEADER, accuracy_csv, run_accuracy_vs_M
from src.experiments.config import ExperimentConfig
from src.features.distribution import DistributionConfig
from src.features.grnf import build_grnf, embed, embed_many
from src.graphio.delaunay import DelaunayParams, delaunay_generate
from src.graphio.sbm import SbmParams, sbm_generate
from src.utils.seeds import derive_seed


def sbm_records(count, seed=0):
    class0 = sbm_generate(SbmParams(n=12, communities=[12], p_in=0.4), count, seed=seed)
    class1 = sbm_generate(SbmParams(n=12, communities=[6, 6], p_in=0.8, p_out=0.1), count, seed=seed + 1)
    return [(g, 0) for g in class0] + [(g, 1) for g in class1]


def small_config(**fields):
    defaults = dict(m_grid=[4, 16, 64], reps=2, ref_m=128, distribution=DistributionConfig(k_max=2))
    defaults.update(fields)
    return ExperimentConfig(**defaults)


def test_config_validation():
    with pytest.raises(ValidationError):
        ExperimentConfig(m_grid=[0, 4])
    with pytest.raises(ValidationError):
        ExperimentConfig(split=1.0)
    with pytest.raises(ValidationError):
        ExperimentConfig(folds=1)


def test_table_shape_and_determinism():
    records = sbm_records(20)
    rows = run_accuracy_vs_M(small_config(), records)
    assert [r.M for r in rows] == [4, 16, 64]
    assert all(0.0 <= r.mean_accuracy <= 1.0 and r.std_accuracy >= 0.0 for r in rows)
    assert rows[0].ref_M == 128 and rows[0].ref_accuracy is not None
    again = run_accuracy_vs_M(small_config(workers=3), records)
    assert accuracy_csv(rows) == accuracy_csv(again)


def test_csv_layout():
    rows = run_accuracy_vs_M(small_config(ref_m=None, m_grid=[8]), sbm_records(10))
    lines = accuracy_csv(rows).splitlines()
    assert lines[0] == ",".join(CSV_HEADER) == "M,mean_accuracy,std_accuracy,ref_M,ref_accuracy"
    assert lines[1].startswith("8,") and lines[1].endswith(",,")


def test_single_feature_grid_runs():
    rows = run_accuracy_vs_M(small_config(m_grid=[1], ref_m=None), sbm_records(15))
    assert len(rows) == 1 and 0.0 <= rows[0].mean_accuracy <= 1.0


def test_folds_and_ridge():
    records = sbm_records(15)
    rows = run_accuracy_vs_M(small_config(folds=3, classifier="ridge", ridge_lambda=1e-3, ref_m=None), records)
    assert len(rows) == 3


def test_embedding_reuse_is_order_free():
    records = sbm_records(10)
    graphs = [g for g, _ in records]
    grnf = build_grnf(32, seed=derive_seed(0, "rep", 0))
    Z = embed_many(grnf, graphs)
    order = np.random.default_rng(0).permutation(len(graphs))
    Z_shuffled = np.stack([embed(grnf, graphs[i]) for i in order])
    np.testing.assert_array_equal(Z_shuffled, Z[order])
    np.testing.assert_array_equal(embed_many(grnf, graphs, workers=4), Z)


@pytest.mark.slow
def test_sbm_accuracy_converges_to_reference():
    config = ExperimentConfig(m_grid=[64, 512, 2048], reps=3, ref_m=4096, folds=5, seed=1, workers=4)
    rows = run_accuracy_vs_M(config, sbm_records(150, seed=5))
    assert abs(rows[-1].mean_accuracy - rows[-1].ref_accuracy) <= 0.05
    assert rows[-1].mean_accuracy > 0.7 and rows[-1].ref_accuracy > 0.7


@pytest.mark.slow
def test_delaunay_accuracy_above_chance():
    records = []
    for label in (0, 1):
        params = DelaunayParams(points_per_graph=12, seeds_per_class=6, noise_sigma=1.0)
        records += [(g, label) for g in delaunay_generate(params, 60, seed=derive_seed(7, "class", label))]
    rows = run_accuracy_vs_M(ExperimentConfig(m_grid=[256], reps=2, ref_m=None), records)
    assert rows[0].mean_accuracy > 0.7
