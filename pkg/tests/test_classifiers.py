import numpy as np
import pytest

from src.experiments.classifiers import knn_classify, one_hot, predict, ridge_readout
from src.utils.errors import ArgumentError


def two_clusters(rng, per_class=30, separation=10.0, dim=4):
    X0 = rng.normal(size=(per_class, dim))
    X1 = rng.normal(size=(per_class, dim)) + separation / np.sqrt(dim)
    return np.vstack([X0, X1]), np.array([0] * per_class + [1] * per_class)


def test_knn_exact_match():
    X = np.array([[0.0, 0.0], [5.0, 5.0], [9.0, 0.0]])
    y = np.array([3, 1, 2])
    predictions, acc = knn_classify(X, y, [[5.0, 5.0]], k=1, test_labels=[1])
    assert predictions.tolist() == [1] and acc == 1.0


def test_knn_separated_clusters(rng):
    X, y = two_clusters(rng)
    Q, yq = two_clusters(rng, per_class=10)
    _, acc = knn_classify(X, y, Q, k=5, test_labels=yq)
    assert acc == 1.0


def test_knn_tie_breaks():
    X = np.array([[-1.0], [2.0]])
    y = np.array([1, 0])
    predictions, acc = knn_classify(X, y, [[0.0]], k=2)
    assert predictions.tolist() == [1]  # equal votes, smaller summed distance
    assert np.isnan(acc)
    X = np.array([[-1.0], [1.0]])
    y = np.array([1, 0])
    predictions, _ = knn_classify(X, y, [[0.0]], k=2)
    assert predictions.tolist() == [0]  # equal votes and distances, lowest label


def test_knn_shuffled_labels_are_near_chance(rng):
    X, y = two_clusters(rng, per_class=50)
    Q, yq = two_clusters(rng, per_class=50)
    accuracies = []
    for _ in range(20):
        _, acc = knn_classify(X, rng.permutation(y), Q, k=5, test_labels=yq)
        accuracies.append(acc)
    assert abs(np.mean(accuracies) - 0.5) <= 0.1


def test_knn_errors():
    with pytest.raises(ArgumentError):
        knn_classify(np.zeros((0, 2)), [], [[0.0, 0.0]])
    with pytest.raises(ArgumentError):
        knn_classify([[0.0]], [0], [[0.0]], k=0)


def test_one_hot():
    Y, classes = one_hot([2, 0, 2, 5])
    assert classes.tolist() == [0, 2, 5]
    np.testing.assert_array_equal(Y, [[0, 1, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1]])


def test_ridge_separable(rng):
    X, y = two_clusters(rng)
    X = np.hstack([X, np.ones((X.shape[0], 1))])
    Y, classes = one_hot(y)
    model = ridge_readout(X, Y, 1e-6, classes)
    assert np.mean(predict(model, X) == y) == 1.0


def test_ridge_infinite_penalty(rng):
    X, y = two_clusters(rng)
    Y, classes = one_hot(y + 3)
    model = ridge_readout(X, Y, np.inf, classes)
    assert not model.weights.any()
    assert set(predict(model, X).tolist()) == {3}


def test_ridge_normal_equation_residual(rng):
    for _ in range(5):
        X = rng.normal(size=(50, 32))
        Y, _ = one_hot(rng.integers(0, 3, size=50))
        lam = 0.1
        model = ridge_readout(X, Y, lam)
        residual = (X.T @ X + lam * np.eye(32)) @ model.weights - X.T @ Y
        assert np.max(np.abs(residual)) <= 1e-8


def test_ridge_rejects_non_positive_penalty():
    with pytest.raises(ArgumentError):
        ridge_readout(np.ones((2, 2)), np.ones((2, 1)), 0.0)
