"""Mistake-driven linear separator with a hard 0/1 score."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..dataset import LabeledDataset
from ..errors import InvalidInputError
from . import _kernels
from .base import ScoringModel, TrainConfig, require_both_classes


@dataclass(frozen=True)
class PerceptronModel(ScoringModel):
    weights: np.ndarray
    bias: float
    converged: bool
    updates: int
    epochs_run: int

    algorithm = "perceptron"

    @property
    def feature_count(self) -> int:
        return self.weights.shape[0]

    def _score_matrix(self, x: np.ndarray) -> np.ndarray:
        # Hard score: strictly positive activation accepts.
        return (x @ self.weights + self.bias > 0.0).astype(np.float64)


def train_perceptron(
    train: LabeledDataset, config: TrainConfig = TrainConfig(), initial=None
) -> PerceptronModel:
    """Train until zero training mistakes or the epoch cap.

    ``initial`` is an optional (weights, bias) warm start; a warm start
    that already separates the data is returned untouched (zero updates).
    Non-convergence is not an error, the model just carries the flag.
    """
    require_both_classes(train.labels)
    X = train.features
    y = train.labels.astype(np.float64)
    if initial is None:
        w = np.zeros(train.feature_count)
        b0 = 0.0
    else:
        w0, b0 = initial
        w = np.asarray(w0, dtype=np.float64).copy()
        if w.shape != (train.feature_count,):
            raise InvalidInputError("initial weights have the wrong length")
        b0 = float(b0)
    b, updates, epochs, converged = _kernels.perceptron_train(
        X, y, w, b0, config.perceptron_epochs
    )
    return PerceptronModel(
        weights=w, bias=float(b), converged=bool(converged),
        updates=int(updates), epochs_run=int(epochs),
    )
