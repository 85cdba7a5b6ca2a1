"""Linear and RBF support vector machines on one dual solver.

Both variants run the pairwise dual optimizer from ``_kernels`` over a
precomputed kernel matrix; they differ only in the kernel and in how the
decision value is evaluated afterwards. Scores are a fixed logistic
squashing of the decision value: any strictly increasing map gives the
same ROC geometry under a threshold sweep, and a fixed map keeps runs
reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..dataset import LabeledDataset
from . import _kernels
from .base import ScoringModel, TrainConfig, require_both_classes, stable_sigmoid

SMO_TOLERANCE = 1e-3
SMO_MAX_EPOCHS = 300
SCORE_CHUNK = 65536


@dataclass(frozen=True)
class LinearSvmModel(ScoringModel):
    weights: np.ndarray
    bias: float
    converged: bool

    algorithm = "linsvm"

    @property
    def feature_count(self) -> int:
        return self.weights.shape[0]

    def decision_values(self, x: np.ndarray) -> np.ndarray:
        return x @ self.weights + self.bias

    def _score_matrix(self, x: np.ndarray) -> np.ndarray:
        return stable_sigmoid(self.decision_values(x))


@dataclass(frozen=True)
class RbfSvmModel(ScoringModel):
    support_vectors: np.ndarray  # (k, n)
    dual_coef: np.ndarray  # (k,) alpha_i * y_i
    bias: float
    gamma: float
    converged: bool

    algorithm = "rbfsvm"

    @property
    def feature_count(self) -> int:
        return self.support_vectors.shape[1]

    def decision_values(self, x: np.ndarray) -> np.ndarray:
        # Chunked so million-row probes stay within a few MB of scratch.
        sv = self.support_vectors
        sv_sq = np.einsum("ij,ij->i", sv, sv)
        out = np.empty(x.shape[0])
        for lo in range(0, x.shape[0], SCORE_CHUNK):
            chunk = x[lo : lo + SCORE_CHUNK]
            d2 = (
                np.einsum("ij,ij->i", chunk, chunk)[:, None]
                + sv_sq[None, :]
                - 2.0 * (chunk @ sv.T)
            )
            np.maximum(d2, 0.0, out=d2)
            out[lo : lo + SCORE_CHUNK] = np.exp(-self.gamma * d2) @ self.dual_coef
        return out + self.bias

    def _score_matrix(self, x: np.ndarray) -> np.ndarray:
        return stable_sigmoid(self.decision_values(x))


def _solve(K: np.ndarray, y: np.ndarray, c: float):
    alpha, bias, epochs = _kernels.smo_solve(
        np.ascontiguousarray(K), y, c, SMO_TOLERANCE, SMO_MAX_EPOCHS
    )
    return alpha, bias, epochs < SMO_MAX_EPOCHS


def train_linear_svm(
    train: LabeledDataset, config: TrainConfig = TrainConfig()
) -> LinearSvmModel:
    require_both_classes(train.labels)
    X = train.features
    y = train.labels.astype(np.float64)
    alpha, bias, converged = _solve(X @ X.T, y, config.svm_c)
    w = (alpha * y) @ X
    return LinearSvmModel(weights=w, bias=float(bias), converged=converged)


def train_rbf_svm(
    train: LabeledDataset, config: TrainConfig = TrainConfig()
) -> RbfSvmModel:
    require_both_classes(train.labels)
    X = train.features
    y = train.labels.astype(np.float64)
    gamma = config.rbf_gamma if config.rbf_gamma is not None else 1.0 / train.feature_count
    sq = np.einsum("ij,ij->i", X, X)
    d2 = sq[:, None] + sq[None, :] - 2.0 * (X @ X.T)
    np.maximum(d2, 0.0, out=d2)
    K = np.exp(-gamma * d2)
    alpha, bias, converged = _solve(K, y, config.svm_c)
    keep = alpha > 0.0
    return RbfSvmModel(
        support_vectors=np.ascontiguousarray(X[keep]),
        dual_coef=alpha[keep] * y[keep],
        bias=float(bias),
        gamma=float(gamma),
        converged=converged,
    )
