"""Beta-noise hardening: synthetic negatives hugging the user's region.

Each feature i of a noise vector is drawn from Beta(a_i, 0.5) with
a_i = |0.5 - mean_i| + 0.5, reflected to 1 - draw when the user mean
sits above 0.5. The reflection reuses the identical per-feature
substream, so mirrored means produce exactly mirrored noise. Training
sets are recomposed to equal thirds (positives : other-user negatives :
beta negatives), or quarters when an auxiliary negative source is
supplied.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dataset import (
    NEGATIVE,
    LabeledDataset,
    concat_datasets,
    read_dataset_csv,
)
from .errors import InvalidInputError

BETA_USER_ID = "beta-noise"
AUX_USER_ID = "aux-negative"


@dataclass(frozen=True)
class BetaNoiseSpec:
    means: np.ndarray
    alphas: np.ndarray
    mirrored: np.ndarray  # bool per feature: mean > 0.5

    beta = 0.5  # second shape parameter, fixed

    @classmethod
    def from_means(cls, user_means) -> "BetaNoiseSpec":
        means = np.asarray(user_means, dtype=np.float64)
        if means.ndim != 1 or means.size == 0:
            raise InvalidInputError("user means must be a nonempty vector")
        if means.min() < 0.0 or means.max() > 1.0:
            raise InvalidInputError("user means must lie in [0,1]")
        return cls(
            means=means,
            alphas=np.abs(0.5 - means) + 0.5,
            mirrored=means > 0.5,
        )


def beta_noise(user_means, count: int, seed: int) -> np.ndarray:
    """(count, n) noise matrix, one independent substream per feature.

    A mean of exactly 0.5 uses the direct (unreflected) branch. Because
    the reflected branch consumes the same draws as the direct one,
    mirroring a mean yields the exact complement column under a shared
    seed: the side that reflects equals 1.0 minus the raw side, bit for
    bit (the relation is directional, since 1-(1-x) != x in floats).
    """
    spec = BetaNoiseSpec.from_means(user_means)
    if count < 1:
        raise InvalidInputError("count must be >= 1")
    n = spec.means.shape[0]
    out = np.empty((count, n))
    for i, child in enumerate(np.random.SeedSequence(seed).spawn(n)):
        draws = np.random.default_rng(child).beta(spec.alphas[i], spec.beta, size=count)
        out[:, i] = 1.0 - draws if spec.mirrored[i] else draws
    return out


def augment_training_set(
    base: LabeledDataset,
    beta_count=None,
    aux_negatives=None,
    seed: int = 0,
) -> LabeledDataset:
    """Recompose a balanced training set with synthetic negatives.

    beta_count defaults to the positive count (equal thirds); passing 0
    with no aux returns ``base`` unchanged. Aux negatives, when given,
    must match the positive count, yielding equal quarters. Noise means
    come from the positive rows of ``base`` only, so nothing about the
    test split leaks into the mitigation.
    """
    pos_rows = base.labels > 0
    pos_count = int(pos_rows.sum())
    if pos_count == 0:
        raise InvalidInputError("base training set has no positive samples")
    if beta_count is None:
        beta_count = pos_count
    if beta_count < 0:
        raise InvalidInputError("beta_count must be >= 0")

    parts = [base]
    if beta_count > 0:
        noise = beta_noise(base.features[pos_rows].mean(axis=0), beta_count, seed)
        parts.append(
            LabeledDataset(
                noise,
                np.full(beta_count, NEGATIVE, dtype=np.int64),
                np.repeat(BETA_USER_ID, beta_count),
            )
        )
    if aux_negatives is not None:
        aux = np.asarray(aux_negatives, dtype=np.float64)
        if aux.ndim != 2 or aux.shape[1] != base.feature_count:
            raise InvalidInputError("aux negatives have the wrong dimension")
        if aux.shape[0] != pos_count:
            raise InvalidInputError(
                f"aux negative count {aux.shape[0]} != positive count {pos_count}"
            )
        parts.append(
            LabeledDataset(
                aux,
                np.full(aux.shape[0], NEGATIVE, dtype=np.int64),
                np.repeat(AUX_USER_ID, aux.shape[0]),
            )
        )
    if len(parts) == 1:
        return base
    return concat_datasets(parts)


def load_aux_negatives(path, feature_count: int) -> np.ndarray:
    """Aux vectors from the CSV interchange format; labels are ignored."""
    data = read_dataset_csv(path)
    if data.feature_count != feature_count:
        raise InvalidInputError(
            f"aux file has {data.feature_count} features, expected {feature_count}"
        )
    return data.features
