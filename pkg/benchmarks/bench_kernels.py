"""Timing harness for the hot kernels: compiled path vs plain numpy.

Each kernel is run on a realistic workload (a synthetic user task of the
default population shape), both variants are checked for agreement, and
the best-of-N wall times are printed side by side.

Usage: python3 benchmarks/bench_kernels.py [--repeat N] [--mlp-steps N]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from regionaudit._accel import HAS_NUMBA, NUMBA_ENABLED
from regionaudit.classifiers import _kernels as k
from regionaudit.classifiers.forest import train_random_forest
from regionaudit.classifiers.mlp import batch_plan, initial_parameters
from regionaudit.classifiers import TrainConfig
from regionaudit.dataset import assemble_user_task, min_max_normalize
from regionaudit.synth import PopulationSpec, generate_population, make_halfspace_dataset


def _user_task(seed: int = 0):
    population = generate_population(PopulationSpec(), seed)
    normalized, _ = min_max_normalize(population.dataset)
    return assemble_user_task(normalized, "u000", seed=seed)


def _best_of(fn, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_smo(repeat):
    train, _ = _user_task()
    X, y = train.features, train.labels.astype(np.float64)
    sq = np.einsum("ij,ij->i", X, X)
    d2 = np.maximum(sq[:, None] + sq[None, :] - 2.0 * (X @ X.T), 0.0)
    K = np.exp(-d2 / X.shape[1])
    args = lambda: (K.copy(), y.copy(), 1e4, 1e-3, 300)
    ref = k.smo_solve_numpy(*args())
    out = k.smo_solve_numba(*args())
    assert np.allclose(ref[0], out[0]) and np.isclose(ref[1], out[1])
    return (
        _best_of(lambda: k.smo_solve_numba(*args()), repeat),
        _best_of(lambda: k.smo_solve_numpy(*args()), repeat),
    )


def _tree_inputs():
    train, _ = _user_task()
    X = train.features
    y01 = (train.labels == 1).astype(np.int64)
    m, n = X.shape
    rng = np.random.default_rng(0)
    idx = rng.integers(0, m, m).astype(np.int64)
    cap = 2 * m + 1
    width = max(1, int(np.sqrt(n)))
    subs = np.sort(np.argsort(rng.random((cap, n)), axis=1)[:, :width], axis=1)
    def fresh():
        return (
            X, y01, idx.copy(), subs.astype(np.int64), 0,
            np.empty(cap, np.int64), np.empty(cap, np.float64),
            np.empty(cap, np.int64), np.empty(cap, np.int64),
            np.empty(cap, np.int64),
        )
    return fresh


def bench_tree(repeat):
    fresh = _tree_inputs()
    a, b = fresh(), fresh()
    na, nb = k.build_tree_numpy(*a), k.build_tree_numba(*b)
    assert na == nb and np.array_equal(a[5][:na], b[5][:na])
    return (
        _best_of(lambda: k.build_tree_numba(*fresh()), repeat),
        _best_of(lambda: k.build_tree_numpy(*fresh()), repeat),
    )


def bench_votes(repeat):
    train, _ = _user_task()
    model = train_random_forest(train, TrainConfig(seed=1))
    probes = np.random.default_rng(2).random((100_000, train.feature_count))
    args = (probes, model.features, model.thresholds, model.lefts,
            model.rights, model.votes, model.roots)
    assert np.array_equal(k.forest_votes_numpy(*args), k.forest_votes_numba(*args))
    return (
        _best_of(lambda: k.forest_votes_numba(*args), repeat),
        _best_of(lambda: k.forest_votes_numpy(*args), repeat),
    )


def bench_mlp(repeat, steps):
    train, _ = _user_task()
    X = train.features
    y01 = (train.labels == 1).astype(np.float64)[:, None]
    cfg = TrainConfig(train_steps=steps, seed=3)
    batches = batch_plan(X.shape[0], cfg.train_steps, cfg.batch_size, cfg.seed)
    def fresh():
        params = initial_parameters(X.shape[1], cfg.hidden_layers, cfg.seed)
        return [X, y01, *[p.copy() for p in params], batches,
                cfg.learning_rate, 0.1]
    a, b = fresh(), fresh()
    ra, rb = k.mlp_train_numpy(*a), k.mlp_train_numba(*b)
    assert ra[0] and rb[0] and np.allclose(a[2], b[2])
    return (
        _best_of(lambda: k.mlp_train_numba(*fresh()), repeat),
        _best_of(lambda: k.mlp_train_numpy(*fresh()), repeat),
    )


def bench_perceptron(repeat):
    data = make_halfspace_dataset(feature_count=50, samples_per_class=2000, seed=4)
    X, y = data.features, data.labels.astype(np.float64)
    def fresh():
        return (X, y, np.zeros(X.shape[1]), 0.0, 1000)
    a, b = fresh(), fresh()
    ra, rb = k.perceptron_train_numpy(*a), k.perceptron_train_numba(*b)
    assert ra[1] == rb[1] and np.array_equal(a[2], b[2])
    return (
        _best_of(lambda: k.perceptron_train_numba(*fresh()), repeat),
        _best_of(lambda: k.perceptron_train_numpy(*fresh()), repeat),
    )


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--mlp-steps", type=int, default=1000)
    args = parser.parse_args()

    print(f"numba available: {HAS_NUMBA}; compiled path enabled: {NUMBA_ENABLED}")
    if not HAS_NUMBA:
        print("note: without numba both columns run the same plain-numpy code")

    rows = [
        ("smo_solve (280x280 kernel, C=1e4)", bench_smo(args.repeat)),
        ("build_tree (280x50 bootstrap)", bench_tree(args.repeat)),
        ("forest_votes (100 trees x 100k rows)", bench_votes(args.repeat)),
        (f"mlp_train ({args.mlp_steps} steps)", bench_mlp(args.repeat, args.mlp_steps)),
        ("perceptron_train (4000x50)", bench_perceptron(args.repeat)),
    ]
    width = max(len(name) for name, _ in rows)
    print(f"{'kernel':<{width}}  {'numba ms':>10}  {'numpy ms':>10}  {'speedup':>8}")
    for name, (tn, tp) in rows:
        ratio = tp / tn if tn > 0 else float("inf")
        print(f"{name:<{width}}  {tn * 1e3:>10.2f}  {tp * 1e3:>10.2f}  {ratio:>7.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
