"""
Classification accuracy as a function of the embedding dimension M

For every repetition one map of the largest grid dimension is sampled and
each smaller M uses its prefix; graphs are embedded once per repetition.
A single reference map of dimension ref_m is evaluated on the same splits.
"""

import csv
import io
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from src.experiments.classifiers import accuracy, knn_classify, one_hot, predict, ridge_readout
from src.experiments.config import ClassifierKind, ExperimentConfig
from src.features.grnf import GrnfMap, build_grnf, plain_weights
from src.graphio.json_io import read_corpus
from src.tensors.graph import Graph
from src.utils.errors import ArgumentError
from src.utils.seeds import derive_seed

logger = logging.getLogger(__name__)

CSV_HEADER = ["M", "mean_accuracy", "std_accuracy", "ref_M", "ref_accuracy"]


@dataclass(frozen=True)
class AccuracyRow:
    M: int
    mean_accuracy: float
    std_accuracy: float
    ref_M: Optional[int]
    ref_accuracy: Optional[float]

    def csv_values(self) -> List[str]:
        values = [getattr(self, c) for c in CSV_HEADER]
        return ["" if v is None else repr(v) if isinstance(v, float) else str(v) for v in values]


def corpus_channels(graphs: Sequence[Graph]) -> int:
    return max(max(g.d_node, g.d_edge, 1) for g in graphs)


def _feature_matrix(grnf: GrnfMap, graphs: Sequence[Graph], workers: int) -> np.ndarray:
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return np.stack(list(pool.map(grnf.feature_values, graphs)))
    return np.stack([grnf.feature_values(g) for g in graphs])


def _splits(config: ExperimentConfig, size: int, rep: int) -> List[Tuple[np.ndarray, np.ndarray]]:
    order = np.random.default_rng(derive_seed(config.seed, "split", rep)).permutation(size)
    if config.folds:
        if config.folds > size:
            raise ArgumentError(f"{config.folds} folds need at least {config.folds} graphs")
        chunks = np.array_split(order, config.folds)
        return [
            (np.concatenate([c for j, c in enumerate(chunks) if j != i]), chunk)
            for i, chunk in enumerate(chunks)
        ]
    cut = int(np.floor(config.split * size))
    if cut < 1 or cut >= size:
        raise ArgumentError(f"Split {config.split} leaves an empty train or test set for {size} graphs")
    return [(order[:cut], order[cut:])]


def _score(config: ExperimentConfig, Z: np.ndarray, labels: np.ndarray, splits) -> float:
    scores = []
    for train, test in splits:
        if config.classifier is ClassifierKind.KNN:
            _, acc = knn_classify(Z[train], labels[train], Z[test], config.knn_k, labels[test])
        else:
            Y, classes = one_hot(labels[train])
            model = ridge_readout(Z[train], Y, config.ridge_lambda, classes)
            acc = accuracy(predict(model, Z[test]), labels[test])
        scores.append(acc)
    return float(np.mean(scores))


def run_accuracy_vs_M(
    config: ExperimentConfig,
    records: Optional[Sequence[Tuple[Graph, int]]] = None,
) -> List[AccuracyRow]:
    """One row per M: mean and std of the accuracy over repetitions, plus the reference accuracy"""
    if records is None:
        if config.input is None:
            raise ArgumentError("Accuracy experiment needs a corpus")
        records = read_corpus(config.input)
    graphs = [g for g, _ in records]
    labels = np.array([label for _, label in records], dtype=np.int64)
    if len(graphs) < 2:
        raise ArgumentError("Accuracy experiment needs at least two graphs")

    distribution = config.distribution.model_copy(update={"channels": corpus_channels(graphs)})
    grid = sorted(set(config.m_grid))
    top = max(grid)
    logger.info(f"🚀 Accuracy experiment: {len(graphs)} graphs, grid={grid}, reps={config.reps}, classifier={config.classifier.value}")

    rep_splits = [_splits(config, len(graphs), rep) for rep in range(config.reps)]
    scores = np.empty((config.reps, len(grid)), dtype=np.float64)
    for rep in range(config.reps):
        grnf = build_grnf(top, distribution, derive_seed(config.seed, "rep", rep))
        F = _feature_matrix(grnf, graphs, config.workers)
        for j, M in enumerate(grid):
            scores[rep, j] = _score(config, plain_weights(M) * F[:, :M], labels, rep_splits[rep])
        logger.info(f"✅ Repetition {rep + 1}/{config.reps} done")

    ref_accuracy = None
    if config.ref_m:
        reference = build_grnf(config.ref_m, distribution, derive_seed(config.seed, "reference"))
        Z_ref = plain_weights(config.ref_m) * _feature_matrix(reference, graphs, config.workers)
        ref_accuracy = float(np.mean([_score(config, Z_ref, labels, s) for s in rep_splits]))

    rows = [
        AccuracyRow(
            M=M,
            mean_accuracy=float(np.mean(scores[:, j])),
            std_accuracy=float(np.std(scores[:, j])),
            ref_M=config.ref_m,
            ref_accuracy=ref_accuracy,
        )
        for j, M in enumerate(grid)
    ]
    logger.info(f"✅ Accuracy experiment finished; reference accuracy {ref_accuracy}")
    return rows


def accuracy_csv(rows: Sequence[AccuracyRow]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for row in rows:
        writer.writerow(row.csv_values())
    return buffer.getvalue()
