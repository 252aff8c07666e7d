# Classification harness and experiment runners
from src.experiments.classifiers import knn_classify, one_hot, predict, ridge_readout
from src.experiments.config import ClassifierKind, ExperimentConfig
from src.experiments.accuracy import run_accuracy_vs_M

__all__ = [
    "knn_classify",
    "one_hot",
    "predict",
    "ridge_readout",
    "ClassifierKind",
    "ExperimentConfig",
    "run_accuracy_vs_M",
]
