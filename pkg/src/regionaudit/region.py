"""Acceptance-region measurement and threshold curves.

The acceptance region of a model at threshold t is the subset of the
unit cube scoring >= t; its volume equals the success probability of a
uniform random-probe attack. Volumes are estimated by Monte Carlo: draw
probes uniformly, score once, and accumulate a histogram of scores
aligned to the threshold grid, so every threshold's estimate falls out
of one pass without storing scores. Counts commute, so the result is
independent of batch scheduling.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import InvalidInputError

DEFAULT_THRESHOLD_COUNT = 100
DEFAULT_MC_SAMPLES = 1_000_000
DEFAULT_REPETITIONS = 50
MC_BATCH = 100_000
DEFAULT_BIN_COUNT = 100


def threshold_grid(count: int = DEFAULT_THRESHOLD_COUNT) -> np.ndarray:
    """Equally spaced thresholds {0, 1/count, ..., (count-1)/count}."""
    if count < 1:
        raise InvalidInputError("threshold count must be >= 1")
    return np.arange(count, dtype=np.float64) / count


def score_histogram(scores: np.ndarray, thresholds: np.ndarray) -> np.ndarray:
    """Counts per grid cell: cell k holds scores in [t_k, t_{k+1}).

    Built with searchsorted against the actual grid values, so
    ``suffix_sum(counts)[k] == (scores >= thresholds[k]).sum()`` exactly,
    including scores that land on a threshold.
    """
    idx = np.searchsorted(thresholds, scores, side="right") - 1
    if idx.size and idx.min() < 0:
        raise InvalidInputError("scores below the lowest threshold")
    return np.bincount(idx, minlength=thresholds.shape[0]).astype(np.int64)


def accept_fraction_curve(counts: np.ndarray, total: int) -> np.ndarray:
    """Fraction of scores >= t_k for every k, from a score histogram."""
    suffix = np.cumsum(counts[::-1])[::-1]
    return suffix / total


@dataclass(frozen=True)
class RegionEstimate:
    """Monte Carlo acceptance volume at every grid threshold."""

    thresholds: np.ndarray
    fractions: np.ndarray
    sample_count: int
    seed: int

    def __post_init__(self):
        f = np.asarray(self.fractions, dtype=np.float64)
        if f.shape != self.thresholds.shape:
            raise InvalidInputError("fractions must align with thresholds")
        if f.size and (f.min() < 0.0 or f.max() > 1.0):
            raise InvalidInputError("fractions must lie in [0,1]")

    @property
    def stderr(self) -> np.ndarray:
        p = self.fractions
        return np.sqrt(p * (1.0 - p) / self.sample_count)

    def at(self, threshold: float) -> float:
        """Estimate at the grid point matching ``threshold`` exactly."""
        hits = np.flatnonzero(self.thresholds == threshold)
        if hits.size == 0:
            raise InvalidInputError(f"{threshold} is not on the threshold grid")
        return float(self.fractions[hits[0]])


def probe_batches(n_samples: int, batch: int = MC_BATCH):
    """Deterministic batch plan: (batch_index, rows) pairs covering
    n_samples. Fixed batch size keeps draws identical however batches
    are distributed over workers."""
    plan = []
    done = 0
    i = 0
    while done < n_samples:
        rows = min(batch, n_samples - done)
        plan.append((i, rows))
        done += rows
        i += 1
    return plan


def probe_block(seed: int, batch_index: int, rows: int, dim: int) -> np.ndarray:
    """Uniform probes for one batch; batch substreams are spawned from
    the seed so any subset of batches can be drawn independently."""
    child = np.random.SeedSequence(seed).spawn(batch_index + 1)[batch_index]
    return np.random.default_rng(child).random((rows, dim))


def estimate_acceptance_region(
    model,
    n_samples: int = DEFAULT_MC_SAMPLES,
    seed: int = 0,
    thresholds: Optional[np.ndarray] = None,
) -> RegionEstimate:
    if n_samples < 1:
        raise InvalidInputError("n_samples must be >= 1")
    if thresholds is None:
        thresholds = threshold_grid()
    counts = np.zeros(thresholds.shape[0], dtype=np.int64)
    for batch_index, rows in probe_batches(n_samples):
        block = probe_block(seed, batch_index, rows, model.feature_count)
        counts += score_histogram(model.score(block), thresholds)
    return RegionEstimate(
        thresholds=thresholds,
        fractions=accept_fraction_curve(counts, n_samples),
        sample_count=n_samples,
        seed=seed,
    )


@dataclass(frozen=True)
class EerPoint:
    """Best-effort equal-error operating point on a discrete grid."""

    index: int
    threshold: float
    frr: float
    fpr: float
    ar: float
    discrepancy: float  # |FRR - FPR| at the chosen point


@dataclass(frozen=True)
class ThresholdCurve:
    thresholds: np.ndarray
    frr: np.ndarray
    fpr: np.ndarray
    ar: np.ndarray
    eer: EerPoint = field(init=False)

    def __post_init__(self):
        for name in ("frr", "fpr", "ar"):
            arr = getattr(self, name)
            if arr.shape != self.thresholds.shape:
                raise InvalidInputError(f"{name} must align with thresholds")
        object.__setattr__(self, "eer", find_eer(self))


def find_eer(curve) -> EerPoint:
    """Grid index minimizing |FRR - FPR|; ties go to the lowest
    threshold. The discrepancy is reported rather than hidden, since a
    coarse grid can leave FRR and FPR unequal at the chosen point."""
    gap = np.abs(curve.frr - curve.fpr)
    k = int(np.argmin(gap))  # first minimum = lowest threshold
    return EerPoint(
        index=k,
        threshold=float(curve.thresholds[k]),
        frr=float(curve.frr[k]),
        fpr=float(curve.fpr[k]),
        ar=float(curve.ar[k]),
        discrepancy=float(gap[k]),
    )


def evaluate_curves(
    model, test, ar: RegionEstimate, thresholds: Optional[np.ndarray] = None
) -> ThresholdCurve:
    """FRR/FPR over the test set joined with the AR estimate.

    FRR(t) = fraction of positives scoring < t; FPR(t) = fraction of
    negatives scoring >= t (accept iff score >= t, boundary inclusive).
    """
    if thresholds is None:
        thresholds = ar.thresholds
    if thresholds.shape != ar.thresholds.shape or not np.array_equal(
        thresholds, ar.thresholds
    ):
        raise InvalidInputError("AR estimate grid does not match the threshold grid")
    pos = test.features[test.labels > 0]
    neg = test.features[test.labels < 0]
    if pos.shape[0] == 0 or neg.shape[0] == 0:
        raise InvalidInputError("test set must contain both classes")
    pos_counts = score_histogram(model.score(pos), thresholds)
    neg_counts = score_histogram(model.score(neg), thresholds)
    frr = 1.0 - accept_fraction_curve(pos_counts, pos.shape[0])
    fpr = accept_fraction_curve(neg_counts, neg.shape[0])
    return ThresholdCurve(thresholds=thresholds, frr=frr, fpr=fpr, ar=ar.fractions)


def rates_at_threshold(model, test, threshold: float):
    """(FRR, FPR) of the model on ``test`` at one fixed threshold."""
    pos = test.features[test.labels > 0]
    neg = test.features[test.labels < 0]
    if pos.shape[0] == 0 or neg.shape[0] == 0:
        raise InvalidInputError("test set must contain both classes")
    frr = float(np.mean(model.score(pos) < threshold))
    fpr = float(np.mean(model.score(neg) >= threshold))
    return frr, fpr


# ---------------------------------------------------------------------------
# Binned true-region volume (how much space the samples actually span).

@dataclass(frozen=True)
class BinnedRegionReport:
    bin_count: int
    cutoff: int  # bins need > cutoff values to count as filled
    alphas: np.ndarray  # filled-bin count per feature
    mode: str  # "binned" or "span"

    @property
    def log10_volume(self) -> float:
        ratios = self.alphas / self.bin_count
        with np.errstate(divide="ignore"):
            return float(np.sum(np.log10(ratios)))


def _bin_indices(values: np.ndarray, bin_count: int) -> np.ndarray:
    idx = np.floor(values * bin_count).astype(np.int64)
    return np.clip(idx, 0, bin_count - 1)


def measure_region_volume(
    samples: np.ndarray,
    bin_count: int = DEFAULT_BIN_COUNT,
    cutoff: int = 0,
    mode: str = "binned",
) -> BinnedRegionReport:
    """Per-feature filled-bin volume of a sample cloud in [0,1]^n.

    mode "binned": alpha_i = #bins holding more than ``cutoff`` values
    (isolated outliers can be ignored by raising the cutoff). mode
    "span": alpha_i = bin(max) - bin(min) + 1, a conservative hull that
    can only exceed the binned count. Volume is returned as log10 via
    the report, since products of alpha_i/B underflow doubles fast.
    """
    x = np.asarray(samples, dtype=np.float64)
    if x.ndim != 2 or x.shape[0] == 0:
        raise InvalidInputError("samples must be a nonempty matrix")
    if bin_count < 1:
        raise InvalidInputError("bin_count must be >= 1")
    if mode not in ("binned", "span"):
        raise InvalidInputError(f"unknown mode {mode!r}")
    n = x.shape[1]
    alphas = np.empty(n, dtype=np.int64)
    for i in range(n):
        idx = _bin_indices(x[:, i], bin_count)
        if mode == "span":
            alphas[i] = idx.max() - idx.min() + 1
        else:
            filled = np.bincount(idx, minlength=bin_count)
            alphas[i] = int((filled > cutoff).sum())
    return BinnedRegionReport(bin_count=bin_count, cutoff=cutoff, alphas=alphas, mode=mode)


def region_overlap(
    samples_a: np.ndarray,
    samples_b: np.ndarray,
    bin_count: int = DEFAULT_BIN_COUNT,
    cutoff: int = 0,
) -> float:
    """log10 volume of the per-feature filled-bin intersection; -inf as
    soon as any feature has disjoint fill."""
    a = np.asarray(samples_a, dtype=np.float64)
    b = np.asarray(samples_b, dtype=np.float64)
    if a.ndim != 2 or b.ndim != 2 or a.shape[1] != b.shape[1]:
        raise InvalidInputError("sample sets must share the feature dimension")
    if a.shape[0] == 0 or b.shape[0] == 0:
        raise InvalidInputError("sample sets must be nonempty")
    total = 0.0
    for i in range(a.shape[1]):
        fa = np.bincount(_bin_indices(a[:, i], bin_count), minlength=bin_count) > cutoff
        fb = np.bincount(_bin_indices(b[:, i], bin_count), minlength=bin_count) > cutoff
        shared = int((fa & fb).sum())
        if shared == 0:
            return float("-inf")
        total += np.log10(shared / bin_count)
    return float(total)


# ---------------------------------------------------------------------------
# CSV emission (%.17g everywhere: values round-trip and re-aggregation
# of written rows reproduces in-memory numbers exactly).

def fmt(value) -> str:
    return format(float(value), ".17g")


def write_curve_csv(curve: ThresholdCurve, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["threshold", "frr", "fpr", "ar"])
        for k in range(curve.thresholds.shape[0]):
            writer.writerow(
                [fmt(curve.thresholds[k]), fmt(curve.frr[k]), fmt(curve.fpr[k]),
                 fmt(curve.ar[k])]
            )


def write_ar_csv(estimate: RegionEstimate, path) -> None:
    stderr = estimate.stderr
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["threshold", "ar", "stderr"])
        for k in range(estimate.thresholds.shape[0]):
            writer.writerow(
                [fmt(estimate.thresholds[k]), fmt(estimate.fractions[k]),
                 fmt(stderr[k])]
            )


def write_eer_csv(eer: EerPoint, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["eer_index", "threshold", "frr_at_eer", "fpr_at_eer", "ar_at_eer",
             "eer_discrepancy"]
        )
        writer.writerow(
            [str(eer.index), fmt(eer.threshold), fmt(eer.frr), fmt(eer.fpr),
             fmt(eer.ar), fmt(eer.discrepancy)]
        )


def write_region_csv(report: BinnedRegionReport, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["feature_index", "alpha"])
        for i, alpha in enumerate(report.alphas):
            writer.writerow([str(i), str(int(alpha))])
        writer.writerow(["log10_volume", fmt(report.log10_volume)])
