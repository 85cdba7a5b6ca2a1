import numpy as np
import pytest

from regionaudit.classifiers import TrainConfig, train_linear_svm, train_rbf_svm
from regionaudit.classifiers.svm import SMO_MAX_EPOCHS
from regionaudit.dataset import LabeledDataset
from regionaudit.errors import InvalidInputError
from regionaudit.synth import make_halfspace_dataset


def _xor(n_per_cell=30, seed=0):
    rng = np.random.default_rng(seed)
    cells = [(0.25, 0.25, -1), (0.75, 0.75, -1), (0.25, 0.75, 1), (0.75, 0.25, 1)]
    X, y = [], []
    for cx, cy, label in cells:
        X.append(np.column_stack([
            rng.normal(cx, 0.08, n_per_cell), rng.normal(cy, 0.08, n_per_cell)
        ]))
        y.append(np.full(n_per_cell, label))
    X = np.clip(np.concatenate(X), 0, 1)
    y = np.concatenate(y).astype(np.int64)
    return LabeledDataset(X, y, np.array(["u"] * len(y)))


def _primal_linear(model, data, c):
    margins = data.labels * model.decision_values(data.features)
    hinge = np.maximum(0.0, 1.0 - margins).sum()
    return 0.5 * float(model.weights @ model.weights) + c * hinge


def test_linear_duality_gap_certifies_optimality():
    """Independent optimality check: primal and dual objectives of the
    trained model must nearly touch."""
    data = make_halfspace_dataset(feature_count=2, samples_per_class=40, seed=4)
    c = 10.0
    model = train_linear_svm(data, TrainConfig(svm_c=c))
    primal = _primal_linear(model, data, c)
    # recover alpha via the dual expression: w = sum alpha_i y_i x_i has no
    # unique inverse, so recompute the dual objective from the solver output
    from regionaudit.classifiers import _kernels
    from regionaudit.classifiers.svm import SMO_TOLERANCE

    K = data.features @ data.features.T
    y = data.labels.astype(np.float64)
    alpha, bias, _ = _kernels.smo_solve(
        np.ascontiguousarray(K), y, c, SMO_TOLERANCE, SMO_MAX_EPOCHS
    )
    dual = alpha.sum() - 0.5 * float((alpha * y) @ K @ (alpha * y))
    assert 0.0 <= alpha.min() and alpha.max() <= c + 1e-9
    gap = primal - dual  # weak duality: primal >= dual always
    assert gap >= -1e-6
    assert gap / (abs(primal) + 1.0) < 0.05


def test_linear_separates_halfspace():
    # seed 0 leaves a clear margin between the classes; the epoch-capped
    # solver separates it perfectly at the default penalty
    data = make_halfspace_dataset(feature_count=5, samples_per_class=80, seed=0)
    model = train_linear_svm(data)
    acc = (model.predict(data.features, 0.5) == data.labels).mean()
    assert acc >= 0.99


def test_scores_anchor_at_the_margin():
    data = make_halfspace_dataset(feature_count=3, samples_per_class=40, seed=8)
    model = train_linear_svm(data)
    probes = np.random.default_rng(0).random((200, 3))
    dec = model.decision_values(probes)
    scores = model.score(probes)
    assert ((scores >= 0.5) == (dec >= 0.0)).all()
    assert scores.min() >= 0.0 and scores.max() <= 1.0


def test_rbf_solves_xor_linear_cannot():
    data = _xor()
    rbf = train_rbf_svm(data, TrainConfig(rbf_gamma=10.0))
    lin = train_linear_svm(data)
    rbf_acc = (rbf.predict(data.features, 0.5) == data.labels).mean()
    lin_acc = (lin.predict(data.features, 0.5) == data.labels).mean()
    assert rbf_acc >= 0.95
    # a halfplane can capture at most 3 of the 4 clusters (~75%)
    assert lin_acc <= 0.8
    assert rbf_acc - lin_acc >= 0.2


def test_rbf_default_gamma_is_one_over_features():
    data = make_halfspace_dataset(feature_count=8, samples_per_class=30, seed=1)
    model = train_rbf_svm(data)
    assert model.gamma == pytest.approx(1.0 / 8.0)


def test_feature_permutation_invariance():
    """Kernels depend on dot products/distances only, so permuting the
    feature columns leaves the kernel matrix unchanged (to rounding) and
    moves the iteratively solved scores at most slightly: the ulp-level
    kernel shifts steer the solver's discrete pivot choices."""
    data = make_halfspace_dataset(feature_count=6, samples_per_class=40, seed=9)
    perm = np.array([3, 0, 5, 1, 4, 2])
    X, Xp = data.features, data.features[:, perm]
    np.testing.assert_allclose(X @ X.T, Xp @ Xp.T, rtol=1e-12)
    permuted = LabeledDataset(Xp, data.labels, data.user_ids)
    probes = np.random.default_rng(2).random((100, 6))
    for train in (train_linear_svm, train_rbf_svm):
        a = train(data)
        b = train(permuted)
        np.testing.assert_allclose(
            a.score(probes), b.score(probes[:, perm]), atol=2e-2
        )


def test_rbf_support_vectors_are_a_subset():
    data = make_halfspace_dataset(feature_count=4, samples_per_class=50, seed=3)
    model = train_rbf_svm(data)
    rows = {tuple(r) for r in data.features}
    assert model.support_vectors.shape[0] >= 1
    assert all(tuple(r) in rows for r in model.support_vectors)


def test_dimension_mismatch_rejected():
    data = make_halfspace_dataset(feature_count=4, samples_per_class=20, seed=0)
    model = train_linear_svm(data)
    with pytest.raises(InvalidInputError):
        model.score(np.zeros(5))


def test_single_class_rejected():
    X = np.random.default_rng(0).random((10, 3))
    data = LabeledDataset(X, -np.ones(10, dtype=int), np.array(["u"] * 10))
    with pytest.raises(InvalidInputError):
        train_rbf_svm(data)
