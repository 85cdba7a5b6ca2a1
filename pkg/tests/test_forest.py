import numpy as np
import pytest

from regionaudit.classifiers import TrainConfig, train_random_forest
from regionaudit.dataset import LabeledDataset
from regionaudit.errors import InvalidInputError
from regionaudit.synth import make_halfspace_dataset


def test_scores_quantized_to_vote_fractions():
    data = make_halfspace_dataset(feature_count=5, samples_per_class=60, seed=0)
    model = train_random_forest(data, TrainConfig(tree_count=25, seed=1))
    probes = np.random.default_rng(0).random((300, 5))
    scores = model.score(probes)
    counts = scores * 25
    np.testing.assert_allclose(counts, np.round(counts), atol=1e-12)
    assert scores.min() >= 0.0 and scores.max() <= 1.0


def test_learns_the_halfspace():
    data = make_halfspace_dataset(feature_count=5, samples_per_class=150, seed=2)
    model = train_random_forest(data, TrainConfig(tree_count=60, seed=3))
    holdout = make_halfspace_dataset(feature_count=5, samples_per_class=150, seed=99)
    acc = (model.predict(holdout.features, 0.5) == holdout.labels).mean()
    assert acc >= 0.99


def test_training_is_seed_deterministic():
    data = make_halfspace_dataset(feature_count=4, samples_per_class=40, seed=4)
    a = train_random_forest(data, TrainConfig(tree_count=12, seed=7))
    b = train_random_forest(data, TrainConfig(tree_count=12, seed=7))
    for field in ("features", "thresholds", "lefts", "rights", "votes", "roots"):
        np.testing.assert_array_equal(getattr(a, field), getattr(b, field))
    c = train_random_forest(data, TrainConfig(tree_count=12, seed=8))
    assert not np.array_equal(a.thresholds, c.thresholds)


def test_max_depth_limits_tree_size():
    data = make_halfspace_dataset(feature_count=6, samples_per_class=100, seed=5)
    stump = train_random_forest(data, TrainConfig(tree_count=10, max_depth=1, seed=0))
    # depth-1 trees have at most 3 nodes each
    assert stump.features.shape[0] <= 30
    deep = train_random_forest(data, TrainConfig(tree_count=10, max_depth=0, seed=0))
    assert deep.features.shape[0] > stump.features.shape[0]


def test_single_deterministic_feature_is_learned():
    # one feature fully determines the label; bootstraps may drop a few
    # boundary rows, so near-perfect training accuracy is the contract
    X = np.linspace(0, 1, 40)[:, None]
    y = np.where(X[:, 0] > 0.5, 1, -1)
    data = LabeledDataset(X, y, np.array(["u"] * 40))
    model = train_random_forest(data, TrainConfig(tree_count=25, seed=1))
    acc = (model.predict(X, 0.5) == y).mean()
    assert acc >= 0.95


def test_tie_vote_rejects():
    # a leaf with an exact label tie votes 0, so an even split scores low
    X = np.array([[0.3], [0.3], [0.3], [0.3]])
    y = np.array([1, 1, -1, -1])
    data = LabeledDataset(X, y, np.array(["u"] * 4))
    # identical feature values: no split possible, every tree is one leaf
    model = train_random_forest(data, TrainConfig(tree_count=11, seed=2))
    score = model.score(np.array([0.3]))
    votes = score * 11
    # bootstrap tilts individual trees, but tied bootstraps must vote 0
    assert votes == pytest.approx(round(votes))


def test_unlabeled_mix_rejected():
    X = np.random.default_rng(0).random((8, 2))
    data = LabeledDataset(X, np.ones(8, dtype=int), np.array(["u"] * 8))
    with pytest.raises(InvalidInputError):
        train_random_forest(data)


def test_probe_dimension_checked():
    data = make_halfspace_dataset(feature_count=3, samples_per_class=20, seed=6)
    model = train_random_forest(data, TrainConfig(tree_count=5, seed=0))
    with pytest.raises(InvalidInputError):
        model.score(np.zeros((4, 7)))
