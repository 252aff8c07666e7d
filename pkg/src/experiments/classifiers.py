"""Downstream classifiers on GRNF embeddings: k-nearest neighbours and a ridge readout"""

from dataclasses import dataclass
from typing import Tuple

import numpy as np
from scipy.linalg import solve
from scipy.spatial.distance import cdist

from src.utils.errors import ArgumentError, ShapeError


def _labels(values) -> np.ndarray:
    return np.asarray(values).reshape(-1).astype(np.int64)


def knn_classify(train_embeddings, train_labels, test_embeddings, k: int = 5, test_labels=None) -> Tuple[np.ndarray, float]:
    """
    Euclidean kNN with majority vote. Vote ties go to the label with the
    smallest summed distance among the k neighbours, then to the lowest label.
    Returns (predictions, accuracy); accuracy is nan without test labels.
    """
    X = np.asarray(train_embeddings, dtype=np.float64)
    Q = np.asarray(test_embeddings, dtype=np.float64)
    y = _labels(train_labels)
    if k < 1:
        raise ArgumentError(f"k must be positive, got {k}")
    if X.shape[0] == 0:
        raise ArgumentError("kNN needs a non-empty training set")
    if X.shape[0] != y.size:
        raise ShapeError(f"{X.shape[0]} training embeddings but {y.size} labels")
    if Q.shape[0] and Q.shape[1] != X.shape[1]:
        raise ShapeError("Train and test embeddings have different dimensions")

    k = min(k, X.shape[0])
    predictions = np.empty(Q.shape[0], dtype=np.int64)
    distances = cdist(Q, X) if Q.shape[0] else np.zeros((0, X.shape[0]))
    for row, dist in enumerate(distances):
        nearest = np.argsort(dist, kind="stable")[:k]
        candidates = np.unique(y[nearest])
        votes = np.array([np.sum(y[nearest] == c) for c in candidates])
        summed = np.array([dist[nearest][y[nearest] == c].sum() for c in candidates])
        best = np.lexsort((candidates, summed, -votes))[0]
        predictions[row] = candidates[best]
    return predictions, accuracy(predictions, test_labels)


def accuracy(predictions, labels) -> float:
    if labels is None:
        return float("nan")
    labels = _labels(labels)
    if labels.size == 0:
        return float("nan")
    return float(np.mean(_labels(predictions) == labels))


def one_hot(labels) -> Tuple[np.ndarray, np.ndarray]:
    """(Y, classes): Y[i, c] = 1 when labels[i] == classes[c]"""
    classes, codes = np.unique(_labels(labels), return_inverse=True)
    return np.eye(classes.size, dtype=np.float64)[codes], classes


@dataclass(frozen=True, eq=False)
class RidgeModel:
    weights: np.ndarray  # (M, classes)
    classes: np.ndarray
    lam: float


def ridge_readout(train_embeddings, train_labels_one_hot, lam: float = 1e-3, classes=None) -> RidgeModel:
    """Closed-form solution of (X^T X + lam I) W = X^T Y; lam = inf gives W = 0"""
    X = np.asarray(train_embeddings, dtype=np.float64)
    Y = np.asarray(train_labels_one_hot, dtype=np.float64)
    if not lam > 0:
        raise ArgumentError(f"Ridge penalty must be positive, got {lam}")
    if X.shape[0] == 0:
        raise ArgumentError("Ridge readout needs a non-empty training set")
    if X.shape[0] != Y.shape[0]:
        raise ShapeError(f"{X.shape[0]} training embeddings but {Y.shape[0]} label rows")
    classes = np.arange(Y.shape[1]) if classes is None else np.asarray(classes)
    if np.isinf(lam):
        return RidgeModel(np.zeros((X.shape[1], Y.shape[1])), classes, float(lam))
    gram = X.T @ X + lam * np.eye(X.shape[1])
    weights = solve(gram, X.T @ Y, assume_a="pos")
    return RidgeModel(weights, classes, float(lam))


def predict(model: RidgeModel, embeddings) -> np.ndarray:
    """argmax of the linear scores; ties resolve to the lowest class"""
    scores = np.asarray(embeddings, dtype=np.float64) @ model.weights
    return model.classes[np.argmax(scores, axis=1)]
