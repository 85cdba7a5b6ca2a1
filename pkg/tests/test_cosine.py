import numpy as np
import pytest

from regionaudit.classifiers import build_cosine_template
from regionaudit.dataset import LabeledDataset
from regionaudit.errors import InvalidInputError


def _data(pos, neg):
    X = np.vstack([pos, neg])
    y = np.concatenate([np.ones(len(pos), dtype=int), -np.ones(len(neg), dtype=int)])
    return LabeledDataset(X, y, np.array(["u"] * len(y)))


def test_template_is_mean_of_positives_only():
    pos = np.array([[1.0, 0.0], [0.0, 1.0]])
    neg = np.array([[9.0, 9.0]])
    model = build_cosine_template(_data(pos, neg))
    np.testing.assert_allclose(model.template, [0.5, 0.5])


def test_score_is_shifted_cosine():
    model = build_cosine_template(_data(np.array([[1.0, 0.0]]), np.array([[0.3, 0.3]])))
    assert model.score(np.array([2.0, 0.0])) == pytest.approx(1.0)  # aligned
    assert model.score(np.array([-1.0, 0.0])) == pytest.approx(0.0)  # opposite
    assert model.score(np.array([0.0, 5.0])) == pytest.approx(0.5)  # orthogonal


def test_score_is_scale_invariant():
    rng = np.random.default_rng(3)
    model = build_cosine_template(_data(rng.random((5, 4)), rng.random((3, 4))))
    v = rng.random(4)
    assert model.score(v) == pytest.approx(model.score(17.0 * v))


def test_zero_vector_scores_zero():
    model = build_cosine_template(
        _data(np.array([[0.5, 0.5]]), np.array([[0.1, 0.9]]))
    )
    assert model.score(np.zeros(2)) == 0.0


def test_needs_positive_samples():
    X = np.array([[0.1, 0.2]])
    data = LabeledDataset(X, np.array([-1]), np.array(["u"]))
    with pytest.raises(InvalidInputError):
        build_cosine_template(data)


def test_zero_mean_template_rejected():
    pos = np.array([[1.0, -1.0], [-1.0, 1.0]])
    with pytest.raises(InvalidInputError):
        build_cosine_template(_data(pos, np.array([[1.0, 1.0]])))
