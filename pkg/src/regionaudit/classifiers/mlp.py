"""Fully connected network: two rectifier hidden layers, logistic output.

Trained with minibatch gradient descent under the adaptive-accumulator
update rule (accumulator init 0.1), on the binary cross-entropy loss.
Batch rows and weight inits are pre-drawn from spawned substreams, so a
seed fixes the entire trajectory.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..dataset import LabeledDataset
from ..errors import TrainingDivergedError
from . import _kernels
from .base import ScoringModel, TrainConfig, require_both_classes, stable_sigmoid

ACCUMULATOR_INIT = 0.1


@dataclass(frozen=True)
class MlpModel(ScoringModel):
    w1: np.ndarray
    b1: np.ndarray
    w2: np.ndarray
    b2: np.ndarray
    w3: np.ndarray
    b3: np.ndarray

    algorithm = "mlp"

    @property
    def feature_count(self) -> int:
        return self.w1.shape[0]

    def _score_matrix(self, x: np.ndarray) -> np.ndarray:
        a1 = np.maximum(x @ self.w1 + self.b1, 0.0)
        a2 = np.maximum(a1 @ self.w2 + self.b2, 0.0)
        return stable_sigmoid(a2 @ self.w3 + self.b3)[:, 0]


def _glorot(rng, fan_in: int, fan_out: int) -> np.ndarray:
    limit = np.sqrt(6.0 / (fan_in + fan_out))
    return rng.uniform(-limit, limit, size=(fan_in, fan_out))


def initial_parameters(feature_count: int, hidden, seed: int):
    h1, h2 = hidden
    rng = np.random.default_rng(np.random.SeedSequence(seed).spawn(2)[0])
    return (
        _glorot(rng, feature_count, h1), np.zeros(h1),
        _glorot(rng, h1, h2), np.zeros(h2),
        _glorot(rng, h2, 1), np.zeros(1),
    )


def batch_plan(sample_count: int, steps: int, batch_size: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(np.random.SeedSequence(seed).spawn(2)[1])
    return rng.integers(0, sample_count, size=(steps, batch_size)).astype(np.int64)


def train_mlp(train: LabeledDataset, config: TrainConfig = TrainConfig()) -> MlpModel:
    require_both_classes(train.labels)
    X = train.features
    y = ((train.labels > 0).astype(np.float64))[:, None]
    params = initial_parameters(train.feature_count, config.hidden_layers, config.seed)
    batches = batch_plan(train.size, config.train_steps, config.batch_size, config.seed)
    ok, loss = _kernels.mlp_train(
        X, y, *params, batches, config.learning_rate, ACCUMULATOR_INIT
    )
    if not ok:
        raise TrainingDivergedError(f"non-finite loss during training ({loss})")
    w1, b1, w2, b2, w3, b3 = params
    return MlpModel(w1=w1, b1=b1, w2=w2, b2=b2, w3=w3, b3=b3)


def loss_and_gradients(params, X: np.ndarray, y01: np.ndarray):
    """Full-batch BCE loss and exact gradients, for verification against
    finite differences. ``params`` = (w1, b1, w2, b2, w3, b3); y01 is a
    column of 0/1 targets."""
    w1, b1, w2, b2, w3, b3 = params
    m = X.shape[0]
    z1 = X @ w1 + b1
    a1 = np.maximum(z1, 0.0)
    z2 = a1 @ w2 + b2
    a2 = np.maximum(z2, 0.0)
    z3 = a2 @ w3 + b3
    p = stable_sigmoid(z3)
    pc = np.clip(p, 1e-12, 1.0 - 1e-12)
    loss = float(-np.mean(y01 * np.log(pc) + (1.0 - y01) * np.log(1.0 - pc)))
    g3 = (p - y01) / m
    gw3 = a2.T @ g3
    gb3 = g3.sum(axis=0)
    ga2 = g3 @ w3.T
    g2 = np.where(z2 > 0.0, ga2, 0.0)
    gw2 = a1.T @ g2
    gb2 = g2.sum(axis=0)
    ga1 = g2 @ w2.T
    g1 = np.where(z1 > 0.0, ga1, 0.0)
    gw1 = X.T @ g1
    gb1 = g1.sum(axis=0)
    return loss, (gw1, gb1, gw2, gb2, gw3, gb3)
