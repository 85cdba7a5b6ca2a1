"""Hierarchical-Gaussian synthetic biometric populations.

Generation model (all draws Gaussian):

1. population level: per-feature mean centers mu_i ~ N(mean_of_means,
   sd_of_means^2) and mean spreads s_i ~ N(mean_of_sds, sd_of_sds^2),
   clamped at 0,
2. user level: per-user feature means mu_ui ~ N(mu_i, s_i^2),
3. sample level: samples_per_user i.i.d. draws from N(mu_ui, sd_ui^2)
   where sd_ui comes from the variance policy (the experiments' control
   variable).

Raw values are deliberately not clipped to [0,1]; the evaluation
pipeline min-max normalizes over the whole dataset afterwards.

Every Gaussian is realized as ``center + scale * Z`` with ``Z`` drawn
from a substream keyed only by (seed, level, user index). Two specs that
differ only in a policy constant therefore reuse identical Z draws, so
sweeping a variance knob moves every sample smoothly and monotonically,
which the variance-trend experiments rely on.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Optional, Union

import numpy as np

from .dataset import LabeledDataset, POSITIVE
from .errors import InvalidInputError


# --------------------------------------------------------------------------
# Variance policies: how each user's per-feature sample SD is chosen.

@dataclass(frozen=True)
class FixedVariance:
    """Every user, every feature: the same sample SD."""

    sd: float
    kind: str = field(default="fixed", init=False)

    def feature_params(self, rng, feature_count):
        return None

    def user_sds(self, rng, feature_count, params):
        return np.full(feature_count, float(self.sd))


@dataclass(frozen=True)
class SampledVariance:
    """Per user-feature SD drawn from N(mean, sd^2), clamped at 0."""

    mean: float
    sd: float
    kind: str = field(default="sampled", init=False)

    def feature_params(self, rng, feature_count):
        return None

    def user_sds(self, rng, feature_count, params):
        draws = self.mean + self.sd * rng.standard_normal(feature_count)
        return np.maximum(draws, 0.0)


@dataclass(frozen=True)
class HierarchicalVariance:
    """Two-level SD model for the population-variance sweep.

    Per feature: center_i ~ N(center, center_sd^2) and
    spread_i ~ N(spread_mean, spread_sd^2), both clamped at 0. Per
    user-feature: sd_ui ~ N(center_i, spread_i^2), clamped at 0.
    """

    center: float
    center_sd: float = 0.05
    spread_mean: float = 0.03
    spread_sd: float = 0.02
    kind: str = field(default="hierarchical", init=False)

    def feature_params(self, rng, feature_count):
        centers = self.center + self.center_sd * rng.standard_normal(feature_count)
        spreads = self.spread_mean + self.spread_sd * rng.standard_normal(feature_count)
        return np.maximum(centers, 0.0), np.maximum(spreads, 0.0)

    def user_sds(self, rng, feature_count, params):
        centers, spreads = params
        draws = centers + spreads * rng.standard_normal(feature_count)
        return np.maximum(draws, 0.0)


VariancePolicy = Union[FixedVariance, SampledVariance, HierarchicalVariance]


@dataclass(frozen=True)
class PopulationSpec:
    user_count: int = 50
    feature_count: int = 50
    mean_of_means: float = 0.5
    sd_of_means: float = 0.1
    mean_of_sds: float = 0.1
    sd_of_sds: float = 0.07
    samples_per_user: int = 200
    variance_policy: VariancePolicy = FixedVariance(0.2)
    # Optional outlier whose sample SD is pinned regardless of policy.
    isolated_user: Optional[int] = None
    isolated_sd: Optional[float] = None

    def __post_init__(self):
        if self.user_count < 2:
            raise InvalidInputError("user_count must be >= 2")
        if self.feature_count < 1:
            raise InvalidInputError("feature_count must be >= 1")
        if self.samples_per_user < 2:
            raise InvalidInputError("samples_per_user must be >= 2")
        if self.sd_of_means < 0 or self.sd_of_sds < 0:
            raise InvalidInputError("spread parameters must be >= 0")
        if (self.isolated_user is None) != (self.isolated_sd is None):
            raise InvalidInputError("isolated_user and isolated_sd go together")
        if self.isolated_user is not None and not (
            0 <= self.isolated_user < self.user_count
        ):
            raise InvalidInputError("isolated_user out of range")

    def user_id(self, index: int) -> str:
        return f"u{index:03d}"


@dataclass(frozen=True)
class FeatureDistribution:
    """Population-level per-feature centers: user means are drawn from
    N(means[i], mean_spreads[i]^2)."""

    means: np.ndarray
    mean_spreads: np.ndarray


@dataclass(frozen=True)
class UserProfile:
    user_id: str
    means: np.ndarray
    sds: np.ndarray


@dataclass(frozen=True)
class Population:
    spec: PopulationSpec
    distribution: FeatureDistribution
    profiles: tuple
    dataset: LabeledDataset  # raw pools, user-major order, labels all +1


def sample_feature_distributions(spec: PopulationSpec, seed: int) -> FeatureDistribution:
    rng = np.random.default_rng(np.random.SeedSequence(seed).spawn(1)[0])
    return _feature_level(spec, rng)[0]


def _feature_level(spec, rng):
    n = spec.feature_count
    means = spec.mean_of_means + spec.sd_of_means * rng.standard_normal(n)
    spreads = spec.mean_of_sds + spec.sd_of_sds * rng.standard_normal(n)
    dist = FeatureDistribution(means=means, mean_spreads=np.maximum(spreads, 0.0))
    policy_params = spec.variance_policy.feature_params(rng, n)
    return dist, policy_params


def generate_population(spec: PopulationSpec, seed: int) -> Population:
    """Materialize the full population: profiles plus raw sample pools.

    Substream layout: child 0 of SeedSequence(seed) drives the population
    level, child 1+u drives user u. Per-user draw order is fixed (means,
    policy SDs, then the sample Z block), so any two specs sharing a
    policy kind consume identical streams.
    """
    n = spec.feature_count
    children = np.random.SeedSequence(seed).spawn(1 + spec.user_count)
    dist, policy_params = _feature_level(spec, np.random.default_rng(children[0]))

    profiles = []
    blocks = []
    for u in range(spec.user_count):
        rng = np.random.default_rng(children[1 + u])
        user_means = dist.means + dist.mean_spreads * rng.standard_normal(n)
        user_sds = spec.variance_policy.user_sds(rng, n, policy_params)
        if u == spec.isolated_user:
            user_sds = np.full(n, float(spec.isolated_sd))
        z = rng.standard_normal((spec.samples_per_user, n))
        blocks.append(user_means + user_sds * z)
        profiles.append(UserProfile(spec.user_id(u), user_means, user_sds))

    features = np.concatenate(blocks)
    user_ids = np.repeat([p.user_id for p in profiles], spec.samples_per_user)
    labels = np.full(features.shape[0], POSITIVE, dtype=np.int64)
    return Population(
        spec=spec,
        distribution=dist,
        profiles=tuple(profiles),
        dataset=LabeledDataset(features, labels, user_ids),
    )


# --------------------------------------------------------------------------
# Sweep configuration builders.

@dataclass(frozen=True)
class SweepPoint:
    """One grid point of an experiment sweep: x-axis label/value + spec."""

    axis: str
    value: float
    spec: PopulationSpec


DEFAULT_SD_GRID = (0.05, 0.10, 0.15, 0.20, 0.25, 0.30, 0.35)
DEFAULT_USER_GRID = (25, 50, 75, 100, 125, 150)
CONTROL_SD = 0.2


def make_isolated_variance_config(
    user_sd_grid=DEFAULT_SD_GRID,
    user_count: int = 50,
    feature_count: int = 50,
    samples_per_user: int = 200,
) -> tuple:
    """Outlier-variance sweep: population SD pinned at 0.2, one isolated
    user's SD walked over the grid. Axis value is SD relative to 0.2."""
    _check_grid(user_sd_grid)
    base = PopulationSpec(
        user_count=user_count,
        feature_count=feature_count,
        samples_per_user=samples_per_user,
        variance_policy=FixedVariance(CONTROL_SD),
        isolated_user=0,
        isolated_sd=CONTROL_SD,
    )
    return tuple(
        SweepPoint("relative_sd", g / CONTROL_SD, replace(base, isolated_sd=float(g)))
        for g in user_sd_grid
    )


def make_population_variance_config(
    mean_sd_grid=DEFAULT_SD_GRID,
    user_count: int = 50,
    feature_count: int = 50,
    samples_per_user: int = 200,
) -> tuple:
    """Population-variance sweep: isolated user's SD pinned at 0.2, the
    rest of the population's SD center walked over the grid."""
    _check_grid(mean_sd_grid)
    points = []
    for g in mean_sd_grid:
        spec = PopulationSpec(
            user_count=user_count,
            feature_count=feature_count,
            samples_per_user=samples_per_user,
            variance_policy=HierarchicalVariance(center=float(g)),
            isolated_user=0,
            isolated_sd=CONTROL_SD,
        )
        points.append(SweepPoint("relative_sd", g / CONTROL_SD, spec))
    return tuple(points)


def make_distance_matcher_spec(
    user_count: int = 50, feature_count: int = 50, samples_per_user: int = 200
) -> PopulationSpec:
    """Low-mean, low-variance population used for the template-matcher
    contrast and the user-count sweep."""
    return PopulationSpec(
        user_count=user_count,
        feature_count=feature_count,
        mean_of_means=0.2,
        sd_of_means=0.05,
        mean_of_sds=0.03,
        sd_of_sds=0.02,
        samples_per_user=samples_per_user,
        variance_policy=SampledVariance(0.03, 0.02),
    )


def make_user_count_configs(
    user_grid=DEFAULT_USER_GRID, feature_count: int = 50, samples_per_user: int = 200
) -> tuple:
    _check_grid(user_grid)
    return tuple(
        SweepPoint(
            "user_count",
            float(u),
            make_distance_matcher_spec(int(u), feature_count, samples_per_user),
        )
        for u in user_grid
    )


def _check_grid(grid):
    values = list(grid)
    if not values:
        raise InvalidInputError("sweep grid must be nonempty")
    if any(v <= 0 for v in values):
        raise InvalidInputError("sweep grid values must be positive")


def make_halfspace_dataset(
    feature_count: int = 10, samples_per_class: int = 200, seed: int = 0
) -> LabeledDataset:
    """Separable sanity dataset: positive iff the first coordinate
    exceeds 0.5; remaining coordinates uniform noise in [0,1]."""
    rng = np.random.default_rng(seed)
    m = samples_per_class
    pos = rng.random((m, feature_count))
    neg = rng.random((m, feature_count))
    pos[:, 0] = 0.5 + 0.5 * (1.0 - rng.random(m))  # (0.5, 1.0]
    neg[:, 0] = 0.5 * rng.random(m)  # [0.0, 0.5)
    features = np.concatenate([pos, neg])
    labels = np.concatenate([np.ones(m, dtype=np.int64), -np.ones(m, dtype=np.int64)])
    users = np.concatenate([np.repeat("target", m), np.repeat("other", m)])
    return LabeledDataset(features, labels, users)
