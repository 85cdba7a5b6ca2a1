"""Shared classifier interface: every model scores into [0,1].

Accept iff score >= threshold (boundary inclusive). Scores are
deterministic functions of (parameters, input); all randomness lives in
training, keyed by TrainConfig.seed.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from ..errors import InvalidInputError


@dataclass(frozen=True)
class TrainConfig:
    """Hyperparameters for every algorithm in one bundle.

    Fields not used by a given algorithm are ignored by it.
    """

    svm_c: float = 1.0e4
    rbf_gamma: Optional[float] = None  # None -> 1/feature_count at fit time
    tree_count: int = 100
    max_depth: int = 0  # 0 means unlimited
    hidden_layers: Tuple[int, int] = (64, 32)
    train_steps: int = 5000
    batch_size: int = 50
    learning_rate: float = 0.05
    perceptron_epochs: int = 1000
    seed: int = 0

    def __post_init__(self):
        if self.svm_c <= 0:
            raise InvalidInputError("svm_c must be > 0")
        if self.rbf_gamma is not None and self.rbf_gamma <= 0:
            raise InvalidInputError("rbf_gamma must be > 0")
        for name in ("tree_count", "train_steps", "batch_size", "perceptron_epochs"):
            if getattr(self, name) < 1:
                raise InvalidInputError(f"{name} must be >= 1")
        if self.max_depth < 0:
            raise InvalidInputError("max_depth must be >= 0 (0 = unlimited)")
        if self.learning_rate <= 0:
            raise InvalidInputError("learning_rate must be > 0")
        if len(self.hidden_layers) != 2 or any(h < 1 for h in self.hidden_layers):
            raise InvalidInputError("hidden_layers must be two positive widths")


class ScoringModel:
    """Base for trained models. Subclasses set ``algorithm`` and
    ``feature_count`` and implement ``_score_matrix``."""

    algorithm: str = "?"
    feature_count: int = 0

    def _score_matrix(self, x: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def score(self, x):
        """Confidence in [0,1]. Accepts one vector (-> float) or a
        matrix of row vectors (-> 1-d array)."""
        arr = np.asarray(x, dtype=np.float64)
        single = arr.ndim == 1
        if single:
            arr = arr[None, :]
        if arr.ndim != 2 or arr.shape[1] != self.feature_count:
            raise InvalidInputError(
                f"expected vectors of length {self.feature_count}, got shape {arr.shape}"
            )
        out = self._score_matrix(np.ascontiguousarray(arr))
        return float(out[0]) if single else out

    def predict(self, x, threshold: float):
        """+1 where score >= threshold, -1 elsewhere."""
        s = self.score(x)
        if np.isscalar(s):
            return 1 if s >= threshold else -1
        return np.where(s >= threshold, 1, -1).astype(np.int64)


def stable_sigmoid(z: np.ndarray) -> np.ndarray:
    z = np.clip(z, -40.0, 40.0)
    return 1.0 / (1.0 + np.exp(-z))


def require_both_classes(labels: np.ndarray) -> None:
    if not ((labels == 1).any() and (labels == -1).any()):
        raise InvalidInputError("training data must contain both classes")
