"""Bagged Gini decision trees with vote-fraction scores."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..dataset import LabeledDataset
from . import _kernels
from .base import ScoringModel, TrainConfig, require_both_classes


@dataclass(frozen=True)
class ForestModel(ScoringModel):
    """All trees packed into flat parallel arrays.

    ``features[i] == -1`` marks node i as a leaf whose 0/1 vote is
    ``votes[i]``; otherwise the node routes on
    ``x[features[i]] <= thresholds[i]`` to ``lefts[i]``/``rights[i]``.
    ``roots`` indexes each tree's root. Score = voting fraction, so it
    is always a multiple of 1/tree_count.
    """

    features: np.ndarray
    thresholds: np.ndarray
    lefts: np.ndarray
    rights: np.ndarray
    votes: np.ndarray
    roots: np.ndarray
    n_features: int

    algorithm = "rndf"

    @property
    def feature_count(self) -> int:
        return self.n_features

    @property
    def tree_count(self) -> int:
        return self.roots.shape[0]

    def _score_matrix(self, x: np.ndarray) -> np.ndarray:
        counts = _kernels.forest_votes(
            x, self.features, self.thresholds, self.lefts, self.rights,
            self.votes, self.roots,
        )
        return counts / self.tree_count


def train_random_forest(
    train: LabeledDataset, config: TrainConfig = TrainConfig()
) -> ForestModel:
    """Bootstrap-bagged trees, sqrt(n) candidate features per split.

    Each tree owns a spawned RNG substream for its bootstrap rows and
    per-node feature subsets, so tree t is reproducible independently of
    how training is scheduled.
    """
    require_both_classes(train.labels)
    X = train.features
    y01 = (train.labels > 0).astype(np.int64)
    m, n = X.shape
    k = max(1, int(np.sqrt(n)))
    cap = 2 * m + 1
    streams = np.random.SeedSequence(config.seed).spawn(config.tree_count)

    parts = {name: [] for name in ("features", "thresholds", "lefts", "rights", "votes")}
    roots = np.empty(config.tree_count, dtype=np.int64)
    offset = 0
    for t in range(config.tree_count):
        rng = np.random.default_rng(streams[t])
        boot = rng.integers(0, m, size=m).astype(np.int64)
        # Pre-drawn candidate features per prospective node, each row
        # ascending so split ties resolve to the lowest feature index.
        subsets = np.sort(
            np.argsort(rng.random((cap, n)), axis=1)[:, :k], axis=1
        ).astype(np.int64)
        nf = np.empty(cap, np.int64)
        nt = np.empty(cap, np.float64)
        nl = np.empty(cap, np.int64)
        nr = np.empty(cap, np.int64)
        nv = np.empty(cap, np.int64)
        count = _kernels.build_tree(
            X, y01, boot, subsets, config.max_depth, nf, nt, nl, nr, nv
        )
        child = slice(0, count)
        parts["features"].append(nf[child].copy())
        parts["thresholds"].append(nt[child].copy())
        parts["lefts"].append(np.where(nl[child] >= 0, nl[child] + offset, -1))
        parts["rights"].append(np.where(nr[child] >= 0, nr[child] + offset, -1))
        parts["votes"].append(nv[child].copy())
        roots[t] = offset
        offset += count

    return ForestModel(
        features=np.concatenate(parts["features"]),
        thresholds=np.concatenate(parts["thresholds"]),
        lefts=np.concatenate(parts["lefts"]),
        rights=np.concatenate(parts["rights"]),
        votes=np.concatenate(parts["votes"]),
        roots=roots,
        n_features=n,
    )
