import numpy as np
import pytest

from regionaudit.classifiers import TrainConfig, train_perceptron
from regionaudit.dataset import LabeledDataset
from regionaudit.errors import InvalidInputError
from regionaudit.synth import make_halfspace_dataset


def test_converges_on_separable_data():
    data = make_halfspace_dataset(feature_count=5, samples_per_class=100, seed=0)
    model = train_perceptron(data, TrainConfig(perceptron_epochs=500))
    assert model.converged
    assert (model.predict(data.features, 0.5) == data.labels).all()


def test_scores_are_hard_zero_one():
    data = make_halfspace_dataset(feature_count=4, samples_per_class=50, seed=1)
    model = train_perceptron(data, TrainConfig(perceptron_epochs=500))
    scores = model.score(data.features)
    assert set(np.unique(scores)) <= {0.0, 1.0}


def test_separating_warm_start_returns_untouched():
    data = make_halfspace_dataset(feature_count=3, samples_per_class=40, seed=2)
    w0 = np.zeros(3)
    w0[0] = 1.0
    model = train_perceptron(data, initial=(w0, -0.5))
    assert model.updates == 0
    assert model.epochs_run == 1
    assert model.converged
    np.testing.assert_array_equal(model.weights, w0)
    assert model.bias == -0.5


def test_nonseparable_data_hits_epoch_cap_without_error():
    rng = np.random.default_rng(3)
    X = rng.random((40, 2))
    y = np.where(rng.random(40) < 0.5, 1, -1)  # labels independent of X
    data = LabeledDataset(X, y, np.array(["u"] * 40))
    model = train_perceptron(data, TrainConfig(perceptron_epochs=15))
    assert not model.converged
    assert model.epochs_run == 15


def test_update_count_matches_replay():
    data = make_halfspace_dataset(feature_count=4, samples_per_class=30, seed=5)
    model = train_perceptron(data, TrainConfig(perceptron_epochs=200))
    # replay the classic rule in plain python and compare end state
    w = np.zeros(4)
    b = 0.0
    updates = 0
    for _ in range(200):
        mistakes = 0
        for xi, yi in zip(data.features, data.labels):
            if yi * (xi @ w + b) <= 0:
                w = w + yi * xi
                b = b + yi
                mistakes += 1
        updates += mistakes
        if mistakes == 0:
            break
    np.testing.assert_allclose(model.weights, w)
    assert model.bias == pytest.approx(b)
    assert model.updates == updates


def test_initial_weights_length_checked():
    data = make_halfspace_dataset(feature_count=4, samples_per_class=10, seed=0)
    with pytest.raises(InvalidInputError):
        train_perceptron(data, initial=(np.zeros(3), 0.0))


def test_single_class_rejected():
    X = np.random.default_rng(0).random((10, 2))
    data = LabeledDataset(X, np.ones(10, dtype=int), np.array(["u"] * 10))
    with pytest.raises(InvalidInputError):
        train_perceptron(data)
