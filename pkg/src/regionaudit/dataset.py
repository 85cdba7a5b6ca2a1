"""Labeled feature datasets: normalization, splitting, negative sampling.

A dataset is a column-oriented bundle of a float64 feature matrix, a
+1/-1 label vector, and a per-row user id. All operations are pure
functions of (inputs, seed) and never mutate their arguments.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError
from .rng import derive_seed

POSITIVE = 1
NEGATIVE = -1


@dataclass(frozen=True)
class LabeledDataset:
    """Feature matrix plus aligned labels and user ids.

    features: (m, n) float64, labels: (m,) int64 of +1/-1,
    user_ids: (m,) unicode array naming the originating user.
    """

    features: np.ndarray
    labels: np.ndarray
    user_ids: np.ndarray

    def __post_init__(self):
        feats = np.ascontiguousarray(np.asarray(self.features, dtype=np.float64))
        labels = np.asarray(self.labels, dtype=np.int64)
        users = np.asarray(self.user_ids, dtype=np.str_)
        if feats.ndim != 2:
            raise InvalidInputError("features must be a 2-d matrix")
        if labels.shape != (feats.shape[0],) or users.shape != (feats.shape[0],):
            raise InvalidInputError("labels/user_ids must align with feature rows")
        bad = ~np.isin(labels, (POSITIVE, NEGATIVE))
        if bad.any():
            raise InvalidInputError(f"labels must be +1 or -1, got {labels[bad][0]}")
        object.__setattr__(self, "features", feats)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "user_ids", users)

    @property
    def size(self) -> int:
        return self.features.shape[0]

    @property
    def feature_count(self) -> int:
        return self.features.shape[1]

    def take(self, indices) -> "LabeledDataset":
        idx = np.asarray(indices, dtype=np.int64)
        return LabeledDataset(self.features[idx], self.labels[idx], self.user_ids[idx])

    def user_rows(self, user_id: str) -> np.ndarray:
        return np.flatnonzero(self.user_ids == user_id)

    def distinct_users(self) -> list:
        return sorted(set(self.user_ids.tolist()))


def concat_datasets(parts) -> LabeledDataset:
    parts = [p for p in parts if p.size > 0]
    if not parts:
        raise InvalidInputError("nothing to concatenate")
    n = parts[0].feature_count
    if any(p.feature_count != n for p in parts):
        raise InvalidInputError("feature counts differ across parts")
    return LabeledDataset(
        np.concatenate([p.features for p in parts]),
        np.concatenate([p.labels for p in parts]),
        np.concatenate([p.user_ids for p in parts]),
    )


@dataclass(frozen=True)
class NormalizationParams:
    """Fitted per-feature (min, max); constant features map to 0.0."""

    minimums: np.ndarray
    maximums: np.ndarray

    def transform(self, features: np.ndarray) -> np.ndarray:
        x = np.asarray(features, dtype=np.float64)
        span = self.maximums - self.minimums
        out = np.zeros_like(x)
        live = span > 0
        out[:, live] = (x[:, live] - self.minimums[live]) / span[live]
        return out


def min_max_normalize(dataset: LabeledDataset):
    """Rescale each feature over the full dataset to [0,1].

    Returns the rescaled dataset and the fitted params so later vectors
    (e.g. held-out probes) can be pushed through the same affine map.
    """
    if dataset.size == 0:
        raise InvalidInputError("cannot normalize an empty dataset")
    params = NormalizationParams(
        minimums=dataset.features.min(axis=0),
        maximums=dataset.features.max(axis=0),
    )
    scaled = params.transform(dataset.features)
    return LabeledDataset(scaled, dataset.labels, dataset.user_ids), params


def train_test_split(dataset: LabeledDataset, train_fraction: float, seed: int):
    """Per-user (stratified) split; floor(count * fraction) rows to train.

    Stratification guarantees every user contributes to both phases, which
    the negative-sampling step depends on.
    """
    if not 0.0 < train_fraction < 1.0:
        raise InvalidInputError(f"train_fraction must be in (0,1), got {train_fraction}")
    train_idx, test_idx = [], []
    for user in dataset.distinct_users():
        rows = dataset.user_rows(user)
        rng = np.random.default_rng(derive_seed(seed, "split", user))
        order = rows[rng.permutation(rows.size)]
        cut = int(rows.size * train_fraction)
        train_idx.append(order[:cut])
        test_idx.append(order[cut:])
    return (
        dataset.take(np.concatenate(train_idx)),
        dataset.take(np.concatenate(test_idx)),
    )


def balanced_negative_sample(
    pool: LabeledDataset, target_user: str, required_count: int, seed: int
) -> LabeledDataset:
    """Draw ~equal negatives from every non-target user.

    Quota per user is ceil(required / (U-1)), without replacement and
    capped at pool size; a seeded random trim then cuts the surplus back
    to exactly ``required_count``. Returned labels are all -1.
    """
    others = [u for u in pool.distinct_users() if u != target_user]
    if not others:
        raise InvalidInputError("negative sampling needs at least one other user")
    if required_count <= 0:
        raise InvalidInputError("required_count must be positive")
    quota = -(-required_count // len(others))
    chosen = []
    for user in others:
        rows = pool.user_rows(user)
        rng = np.random.default_rng(derive_seed(seed, "neg", user))
        take = min(quota, rows.size)
        chosen.append(rng.choice(rows, size=take, replace=False))
    candidates = np.concatenate(chosen)
    if candidates.size < required_count:
        raise InvalidInputError(
            f"pools too small: {candidates.size} candidates < {required_count} requested"
        )
    rng = np.random.default_rng(derive_seed(seed, "neg-trim"))
    keep = np.sort(rng.choice(candidates.size, size=required_count, replace=False))
    picked = pool.take(candidates[keep])
    return LabeledDataset(
        picked.features, np.full(required_count, NEGATIVE, dtype=np.int64), picked.user_ids
    )


def assemble_user_task(
    population: LabeledDataset,
    target_user: str,
    train_fraction: float = 0.7,
    seed: int = 0,
    negative_seed=None,
):
    """Build a balanced one-vs-rest train/test pair for one user.

    The population must already be normalized. ``seed`` fixes the split;
    ``negative_seed`` (defaults to a child of ``seed``) fixes which
    negatives are drawn, so repeated evaluations can hold the split while
    re-rolling the negatives. Train and test negatives come from the
    matching split partitions only, so no row leaks across the boundary.
    """
    if target_user not in population.distinct_users():
        raise InvalidInputError(f"unknown target user {target_user!r}")
    if negative_seed is None:
        negative_seed = derive_seed(seed, "negatives")
    train_pool, test_pool = train_test_split(population, train_fraction, seed)
    parts = []
    for tag, pool in (("train", train_pool), ("test", test_pool)):
        pos_rows = pool.user_rows(target_user)
        positives = LabeledDataset(
            pool.features[pos_rows],
            np.full(pos_rows.size, POSITIVE, dtype=np.int64),
            pool.user_ids[pos_rows],
        )
        negatives = balanced_negative_sample(
            pool, target_user, pos_rows.size, derive_seed(negative_seed, tag)
        )
        parts.append(concat_datasets([positives, negatives]))
    return parts[0], parts[1]


# ---------------------------------------------------------------------------
# CSV interchange: header `user_id,label,f0,...`, +1/-1 labels, %.17g reals
# (round-trips float64 losslessly).

def write_dataset_csv(dataset: LabeledDataset, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["user_id", "label"] + [f"f{i}" for i in range(dataset.feature_count)]
        )
        for i in range(dataset.size):
            label = "+1" if dataset.labels[i] == POSITIVE else "-1"
            row = [str(dataset.user_ids[i]), label]
            row.extend(format(v, ".17g") for v in dataset.features[i])
            writer.writerow(row)


def read_dataset_csv(path) -> LabeledDataset:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if not header or header[:2] != ["user_id", "label"]:
            raise InvalidInputError(f"{path}: expected header starting user_id,label")
        users, labels, rows = [], [], []
        for record in reader:
            if not record:
                continue
            users.append(record[0])
            labels.append(int(record[1]))
            rows.append([float(v) for v in record[2:]])
    if not rows:
        raise InvalidInputError(f"{path}: no data rows")
    return LabeledDataset(np.array(rows), np.array(labels), np.array(users))
