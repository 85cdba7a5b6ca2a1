"""Experiment orchestration: seeded sweeps, aggregation, CSV emission.

Execution model: every experiment expands into pure tasks keyed by
(grid index, classifier, user, arm). A task regenerates its population
from a spec + seed, evaluates one user under one classifier for all
repetitions, and returns plain numbers. Tasks may run in any order and
on any number of workers; results are collected into a dict and every
file is written by this process in sorted-key order, so output bytes
depend only on the master seed.

Aggregate tables are always derived from the units table (the
per-task rows as written to units.csv), in row order. The ``report``
entry point re-derives them from the CSV; since floats are serialized
with 17 significant digits they parse back exactly, and re-aggregation
reproduces the run's own aggregate files byte for byte.
"""

from __future__ import annotations

import csv
import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, replace
from typing import Optional

import numpy as np

from . import __version__
from .classifiers import TRAINERS, TrainConfig, train
from .dataset import (
    LabeledDataset,
    assemble_user_task,
    min_max_normalize,
    read_dataset_csv,
)
from .errors import InvalidInputError
from .mitigation import augment_training_set
from .region import (
    EerPoint,
    RegionEstimate,
    ThresholdCurve,
    estimate_acceptance_region,
    evaluate_curves,
    fmt,
    measure_region_volume,
    threshold_grid,
    write_curve_csv,
)
from .rng import derive_seed
from .synth import (
    PopulationSpec,
    SweepPoint,
    generate_population,
    make_halfspace_dataset,
    make_isolated_variance_config,
    make_population_variance_config,
    make_distance_matcher_spec,
    make_user_count_configs,
)

EXPERIMENT_NAMES = (
    "per-user-ar",
    "roc-curves",
    "isolated-variance",
    "population-variance",
    "distance-classifier",
    "vary-users",
    "mitigation",
    "propositions",
)

_ML_CLASSIFIERS = ("linsvm", "rbfsvm", "rndf", "mlp")

_DEFAULT_CLASSIFIERS = {
    "per-user-ar": _ML_CLASSIFIERS,
    "roc-curves": _ML_CLASSIFIERS,
    "isolated-variance": ("linsvm", "rbfsvm"),
    "population-variance": _ML_CLASSIFIERS,
    "distance-classifier": ("cosine", "linsvm", "rbfsvm", "rndf"),
    "vary-users": _ML_CLASSIFIERS,
    "mitigation": _ML_CLASSIFIERS,
    "propositions": ("perceptron",),
}

_DEFAULT_THRESHOLDS = {"distance-classifier": 1000}

FIXED_THRESHOLD = 0.5


@dataclass(frozen=True)
class Profile:
    mc_samples: int
    repetitions: int
    users_evaluated: Optional[int]


PROFILES = {
    "quick": Profile(mc_samples=10_000, repetitions=5, users_evaluated=20),
    "paper": Profile(mc_samples=1_000_000, repetitions=50, users_evaluated=None),
}


@dataclass(frozen=True)
class EvalSettings:
    mc_samples: int = 1_000_000
    repetitions: int = 50
    threshold_count: int = 100
    train_fraction: float = 0.7
    fixed_threshold: float = FIXED_THRESHOLD

    def __post_init__(self):
        if self.mc_samples < 1 or self.repetitions < 1:
            raise InvalidInputError("mc_samples and repetitions must be >= 1")


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str
    outdir: str
    classifiers: tuple = ()  # empty -> experiment default
    seed: int = 0
    mc_samples: int = 1_000_000
    repetitions: int = 50
    threshold_count: Optional[int] = None  # None -> experiment default
    users_evaluated: Optional[int] = None  # None -> every user
    jobs: int = 1
    train_config: TrainConfig = TrainConfig()
    dataset_path: Optional[str] = None  # external pools instead of synthesis

    def __post_init__(self):
        if self.experiment not in EXPERIMENT_NAMES:
            raise InvalidInputError(
                f"unknown experiment {self.experiment!r}; "
                f"choose from {', '.join(EXPERIMENT_NAMES)}"
            )
        object.__setattr__(self, "classifiers", tuple(self.classifiers))
        for tag in self.classifiers:
            if tag not in TRAINERS:
                raise InvalidInputError(f"unknown classifier {tag!r}")
        if self.dataset_path is not None and self.experiment not in (
            "per-user-ar", "roc-curves", "mitigation", "distance-classifier",
        ):
            raise InvalidInputError(
                "dataset_path only applies to single-population experiments"
            )

    def resolved_classifiers(self) -> tuple:
        return self.classifiers or _DEFAULT_CLASSIFIERS[self.experiment]

    def resolved_threshold_count(self) -> int:
        if self.threshold_count is not None:
            return self.threshold_count
        return _DEFAULT_THRESHOLDS.get(self.experiment, 100)

    def settings(self) -> EvalSettings:
        return EvalSettings(
            mc_samples=self.mc_samples,
            repetitions=self.repetitions,
            threshold_count=self.resolved_threshold_count(),
        )


@dataclass(frozen=True)
class UserEvaluationReport:
    user_id: str
    algorithm: str
    repetitions: int
    curve: ThresholdCurve  # repetition-averaged
    per_rep_fixed: np.ndarray  # (reps, 3): FRR, FPR, AR at fixed threshold
    fixed_threshold: float
    pos_log10_volume: float
    neg_log10_volume: float

    @property
    def eer(self) -> EerPoint:
        return self.curve.eer

    def mean_fixed(self) -> np.ndarray:
        return self.per_rep_fixed.mean(axis=0)


def run_user_evaluation(
    population: LabeledDataset,
    target_user: str,
    algorithm: str,
    settings: EvalSettings = EvalSettings(),
    train_config: TrainConfig = TrainConfig(),
    seed: int = 0,
    mitigated: bool = False,
    aux_vectors=None,
) -> UserEvaluationReport:
    """Full per-user methodology on an already normalized population.

    The train/test split is held fixed across repetitions; negatives,
    training randomness, probe streams and (when mitigated) noise draws
    are re-sampled per repetition. Curves are averaged pointwise over
    repetitions and the operating point is located on the average.
    """
    grid = threshold_grid(settings.threshold_count)
    split_seed = derive_seed(seed, "split")
    frr_sum = np.zeros_like(grid)
    fpr_sum = np.zeros_like(grid)
    ar_sum = np.zeros_like(grid)
    fixed = np.empty((settings.repetitions, 3))
    for r in range(settings.repetitions):
        train_set, test_set = assemble_user_task(
            population,
            target_user,
            settings.train_fraction,
            split_seed,
            negative_seed=derive_seed(seed, "negatives", r),
        )
        if mitigated:
            train_set = augment_training_set(
                train_set, aux_negatives=aux_vectors, seed=derive_seed(seed, "noise", r)
            )
        cfg = replace(train_config, seed=derive_seed(seed, "train", r))
        model = train(algorithm, train_set, cfg)
        ar = estimate_acceptance_region(
            model, settings.mc_samples, derive_seed(seed, "probe", r), grid
        )
        curve = evaluate_curves(model, test_set, ar)
        frr_sum += curve.frr
        fpr_sum += curve.fpr
        ar_sum += curve.ar
        k = np.flatnonzero(grid == settings.fixed_threshold)
        if k.size == 0:
            raise InvalidInputError("fixed threshold must lie on the grid")
        fixed[r] = (curve.frr[k[0]], curve.fpr[k[0]], curve.ar[k[0]])
    reps = settings.repetitions
    mean_curve = ThresholdCurve(
        thresholds=grid, frr=frr_sum / reps, fpr=fpr_sum / reps, ar=ar_sum / reps
    )
    own = population.features[population.user_ids == target_user]
    rest = population.features[population.user_ids != target_user]
    return UserEvaluationReport(
        user_id=target_user,
        algorithm=algorithm,
        repetitions=reps,
        curve=mean_curve,
        per_rep_fixed=fixed,
        fixed_threshold=settings.fixed_threshold,
        pos_log10_volume=measure_region_volume(own).log10_volume,
        neg_log10_volume=measure_region_volume(rest).log10_volume,
    )


# ---------------------------------------------------------------------------
# Task fabric.

def _evaluate_unit(payload: dict) -> dict:
    """One (population, user, classifier, arm) evaluation; pure."""
    if payload.get("data") is not None:
        normalized, _ = min_max_normalize(payload["data"])
    else:
        population = generate_population(payload["spec"], payload["pop_seed"])
        normalized, _ = min_max_normalize(population.dataset)
    report = run_user_evaluation(
        normalized,
        payload["target"],
        payload["algorithm"],
        payload["settings"],
        payload["train_config"],
        payload["seed"],
        mitigated=payload.get("mitigated", False),
    )
    eer = report.eer
    mean_fixed = report.mean_fixed()
    out = {
        "eer_index": eer.index,
        "eer_threshold": eer.threshold,
        "frr_at_eer": eer.frr,
        "fpr_at_eer": eer.fpr,
        "ar_at_eer": eer.ar,
        "eer_discrepancy": eer.discrepancy,
        "frr_fixed": float(mean_fixed[0]),
        "fpr_fixed": float(mean_fixed[1]),
        "ar_fixed": float(mean_fixed[2]),
        "pos_log10_volume": report.pos_log10_volume,
        "neg_log10_volume": report.neg_log10_volume,
    }
    if payload.get("keep_curve", False):
        out["curve"] = (report.curve.frr, report.curve.fpr, report.curve.ar)
        out["thresholds"] = report.curve.thresholds
    return out


def _proposition_unit(payload: dict) -> dict:
    """Separable-halfspace sanity check with a warm-started perceptron."""
    from .classifiers.perceptron import train_perceptron
    from .region import rates_at_threshold

    n = payload["feature_count"]
    train_set = make_halfspace_dataset(n, payload["samples"], derive_seed(payload["seed"], "train"))
    test_set = make_halfspace_dataset(n, payload["samples"], derive_seed(payload["seed"], "test"))
    w0 = np.zeros(n)
    w0[0] = 1.0
    model = train_perceptron(train_set, payload["train_config"], initial=(w0, -0.5))
    grid = threshold_grid(payload["settings"].threshold_count)
    ar = estimate_acceptance_region(
        model, payload["settings"].mc_samples, derive_seed(payload["seed"], "probe"), grid
    )
    train_frr, train_fpr = rates_at_threshold(model, train_set, FIXED_THRESHOLD)
    test_frr, test_fpr = rates_at_threshold(model, test_set, FIXED_THRESHOLD)
    k = np.flatnonzero(grid == FIXED_THRESHOLD)[0]
    return {
        "updates": float(model.updates),
        "converged": float(model.converged),
        "train_frr": train_frr,
        "train_fpr": train_fpr,
        "test_frr": test_frr,
        "test_fpr": test_fpr,
        "ar_at_half": float(ar.fractions[k]),
        "ar_stderr_at_half": float(ar.stderr[k]),
        "mc_samples": float(ar.sample_count),
    }


_TASK_KINDS = {"evaluate": _evaluate_unit, "propositions": _proposition_unit}


def _run_task(task):
    key, kind, payload = task
    try:
        return key, _TASK_KINDS[kind](payload), None
    except Exception as exc:  # noqa: BLE001 - per-unit isolation is the contract
        return key, None, f"{type(exc).__name__}: {exc}"


def _execute(tasks, jobs: int):
    """Run tasks (any order) and return ({key: result}, {key: error})."""
    results, failures = {}, {}
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            outcomes = list(pool.map(_run_task, tasks))
    else:
        outcomes = [_run_task(t) for t in tasks]
    for key, result, error in outcomes:
        if error is None:
            results[key] = result
        else:
            failures[key] = error
    return results, failures


# ---------------------------------------------------------------------------
# Experiment definitions.

def _population_seed(config: ExperimentConfig) -> int:
    # One population stream shared by every grid point: sweeps reuse
    # identical draws so only the swept knob moves the samples.
    return derive_seed(config.seed, config.experiment, "population")


def _unit_seed(config: ExperimentConfig, *parts) -> int:
    return derive_seed(config.seed, config.experiment, *parts)


def _evaluated_users(point: SweepPoint, config: ExperimentConfig, data):
    if data is not None:
        ids = list(data.distinct_users())
    else:
        spec = point.spec
        ids = [spec.user_id(u) for u in range(spec.user_count)]
    if config.users_evaluated is None:
        return ids
    return ids[: config.users_evaluated]


def _sweep_tasks(config, points, mitigated_arms=False):
    """Tasks for sweep/user-grid experiments (one flat list)."""
    tasks = []
    settings = config.settings()
    keep_curve = config.experiment in ("roc-curves", "distance-classifier")
    data = None
    if config.dataset_path is not None:
        data = read_dataset_csv(config.dataset_path)
    for gi, point in enumerate(points):
        users = _evaluated_users(point, config, data)
        for tag in config.resolved_classifiers():
            for user in users:
                arms = ("normal", "mitigated") if mitigated_arms else ("normal",)
                for arm in arms:
                    key = (gi, tag, user, arm)
                    payload = {
                        "spec": point.spec,
                        "pop_seed": _population_seed(config),
                        "data": data,
                        "target": user,
                        "algorithm": tag,
                        "settings": settings,
                        "train_config": config.train_config,
                        "seed": _unit_seed(config, gi, tag, user, arm),
                        "mitigated": arm == "mitigated",
                        "keep_curve": keep_curve,
                    }
                    tasks.append((key, "evaluate", payload))
    return tasks


def _experiment_points(config: ExperimentConfig):
    name = config.experiment
    if name == "isolated-variance":
        return make_isolated_variance_config()
    if name == "population-variance":
        return make_population_variance_config()
    if name == "vary-users":
        return make_user_count_configs()
    if name == "distance-classifier":
        return (SweepPoint("population", 0.0, make_distance_matcher_spec()),)
    # Default population for the methodology experiments.
    return (SweepPoint("population", 0.0, PopulationSpec()),)


def run_experiment(config: ExperimentConfig):
    """Execute a named experiment; returns the list of files written."""
    os.makedirs(config.outdir, exist_ok=True)
    if config.experiment == "propositions":
        return _run_propositions(config)
    points = _experiment_points(config)
    mitigated = config.experiment == "mitigation"
    tasks = _sweep_tasks(config, points, mitigated_arms=mitigated)
    results, failures = _execute(tasks, config.jobs)
    task_keys = [t[0] for t in tasks]
    units = _unit_rows(config, points, task_keys, results)
    files = _emit(config, points, units, results, failures)
    return files


def _unit_rows(config, points, task_keys, results):
    """units.csv rows, in sorted task-key order."""
    rows = []
    for key in sorted(task_keys):
        if key not in results:
            continue
        gi, tag, user, arm = key
        r = results[key]
        row = {
            "axis": points[gi].axis,
            "axis_value": points[gi].value,
            "grid_index": gi,
            "classifier": tag,
            "user_id": user,
            "arm": arm,
            "is_isolated": int(user == points[gi].spec.user_id(points[gi].spec.isolated_user))
            if points[gi].spec.isolated_user is not None
            else 0,
        }
        for field in (
            "eer_index", "eer_threshold", "frr_at_eer", "fpr_at_eer", "ar_at_eer",
            "eer_discrepancy", "frr_fixed", "fpr_fixed", "ar_fixed",
            "pos_log10_volume", "neg_log10_volume",
        ):
            row[field] = r[field]
        rows.append(row)
    return rows


UNIT_COLUMNS = (
    "axis", "axis_value", "grid_index", "classifier", "user_id", "arm",
    "is_isolated", "eer_index", "eer_threshold", "frr_at_eer", "fpr_at_eer",
    "ar_at_eer", "eer_discrepancy", "frr_fixed", "fpr_fixed", "ar_fixed",
    "pos_log10_volume", "neg_log10_volume",
)

_INT_COLUMNS = {"grid_index", "is_isolated", "eer_index"}
_STR_COLUMNS = {"axis", "classifier", "user_id", "arm"}


def _cell(column: str, value) -> str:
    if column in _STR_COLUMNS:
        return str(value)
    if column in _INT_COLUMNS:
        return str(int(value))
    return fmt(value)


def _write_units(path, rows):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(UNIT_COLUMNS)
        for row in rows:
            writer.writerow([_cell(c, row[c]) for c in UNIT_COLUMNS])


def read_units(path):
    rows = []
    with open(path, newline="") as fh:
        for record in csv.DictReader(fh):
            row = {}
            for column, value in record.items():
                if column in _STR_COLUMNS:
                    row[column] = value
                elif column in _INT_COLUMNS:
                    row[column] = int(value)
                else:
                    row[column] = float(value)
            rows.append(row)
    return rows


# --- aggregate tables (all derived exclusively from unit rows) -------------

def _mean(rows, field):
    return float(np.mean(np.array([r[field] for r in rows])))


def _aggregate_series(units, fields, split_isolated: bool = True):
    """Per (classifier, grid point): means of ``fields``, optionally split
    by the isolated flag. Row order follows first appearance in units."""
    series = {}
    order = []
    for row in units:
        key = (row["classifier"], row["grid_index"])
        if key not in series:
            series[key] = {"axis_value": row["axis_value"], "isolated": [], "system": []}
            order.append(key)
        bucket = "isolated" if split_isolated and row["is_isolated"] else "system"
        series[key][bucket].append(row)
    scopes = ("system", "isolated") if split_isolated else ("system",)
    out = []
    for tag, gi in order:
        entry = series[(tag, gi)]
        rec = {"classifier": tag, "grid_index": gi, "axis_value": entry["axis_value"]}
        for scope in scopes:
            rows = entry[scope]
            for field in fields:
                name = f"{scope}_{field}" if split_isolated else field
                rec[name] = _mean(rows, field) if rows else float("nan")
        out.append(rec)
    return out


def _aggregate_by_classifier(units, fields, split_arm=False):
    groups = {}
    order = []
    for row in units:
        key = (row["classifier"], row["arm"]) if split_arm else (row["classifier"],)
        if key not in groups:
            groups[key] = []
            order.append(key)
        groups[key].append(row)
    out = []
    for key in order:
        rec = {"classifier": key[0]}
        if split_arm:
            rec["arm"] = key[1]
        for field in fields:
            rec[f"mean_{field}"] = _mean(groups[key], field)
        out.append(rec)
    return out


def _write_table(path, columns, rows, str_columns=("classifier", "arm", "user_id")):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(columns)
        for row in rows:
            writer.writerow(
                [str(row[c]) if c in str_columns else
                 (str(int(row[c])) if c == "grid_index" else fmt(row[c]))
                 for c in columns]
            )


_SERIES_FIELDS = ("ar_fixed", "frr_fixed", "fpr_fixed")
_EER_FIELDS = ("frr_at_eer", "fpr_at_eer", "ar_at_eer", "eer_discrepancy")


def derive_aggregates(experiment: str, units):
    """Aggregate tables for an experiment, as {filename: (columns, rows)}."""
    out = {}
    if experiment in ("isolated-variance", "population-variance"):
        rows = _aggregate_series(units, _SERIES_FIELDS)
        columns = ["classifier", "grid_index", "axis_value"]
        for scope in ("system", "isolated"):
            columns += [f"{scope}_{f}" for f in _SERIES_FIELDS]
        out["series.csv"] = (columns, rows)
    elif experiment == "vary-users":
        fields = _EER_FIELDS[:3] + ("ar_fixed",)
        rows = _aggregate_series(units, fields, split_isolated=False)
        columns = ["classifier", "grid_index", "axis_value"] + list(fields)
        out["series.csv"] = (columns, rows)
    elif experiment == "mitigation":
        rows = _aggregate_by_classifier(units, _EER_FIELDS[:3], split_arm=True)
        columns = ["classifier", "arm"] + [f"mean_{f}" for f in _EER_FIELDS[:3]]
        out["table.csv"] = (columns, rows)
    elif experiment in ("per-user-ar", "roc-curves", "distance-classifier"):
        rows = _aggregate_by_classifier(units, _EER_FIELDS)
        columns = ["classifier"] + [f"mean_{f}" for f in _EER_FIELDS]
        out["contrast.csv"] = (columns, rows)
    return out


def _emit(config, points, units, results, failures):
    outdir = config.outdir
    files = []

    units_path = os.path.join(outdir, "units.csv")
    _write_units(units_path, units)
    files.append(units_path)

    for name, (columns, rows) in derive_aggregates(config.experiment, units).items():
        path = os.path.join(outdir, name)
        _write_table(path, columns, rows)
        files.append(path)

    if config.experiment == "per-user-ar":
        path = os.path.join(outdir, "scatter.csv")
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["user_id", "classifier", "fpr_at_eer", "ar_at_eer"])
            for row in units:
                writer.writerow(
                    [row["user_id"], row["classifier"], fmt(row["fpr_at_eer"]),
                     fmt(row["ar_at_eer"])]
                )
        files.append(path)

    if config.experiment in ("roc-curves", "distance-classifier"):
        files.extend(_emit_mean_curves(config, units, results))

    if failures:
        path = os.path.join(outdir, "failures.csv")
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["grid_index", "classifier", "user_id", "arm", "error"])
            for key in sorted(failures):
                gi, tag, user, arm = key
                writer.writerow([str(gi), tag, user, arm, failures[key]])
        files.append(path)

    files.append(_write_manifest(config))
    files.append(_write_summary(config, units, failures))
    return files


def _emit_mean_curves(config, units, results):
    """Pointwise mean ROC per classifier over evaluated (user, rep) curves."""
    files = []
    by_tag = {}
    for key in sorted(results):
        gi, tag, user, arm = key
        r = results[key]
        if "curve" not in r:
            continue
        by_tag.setdefault(tag, []).append(r)
    for tag in sorted(by_tag):
        group = by_tag[tag]
        thresholds = group[0]["thresholds"]
        frr = np.mean([g["curve"][0] for g in group], axis=0)
        fpr = np.mean([g["curve"][1] for g in group], axis=0)
        ar = np.mean([g["curve"][2] for g in group], axis=0)
        curve = ThresholdCurve(thresholds=thresholds, frr=frr, fpr=fpr, ar=ar)
        path = os.path.join(config.outdir, f"roc_{tag}.csv")
        write_curve_csv(curve, path)
        files.append(path)
    return files


def _run_propositions(config: ExperimentConfig):
    settings = config.settings()
    payload = {
        "feature_count": 10,
        "samples": 200,
        "seed": _unit_seed(config, "halfspace"),
        "settings": settings,
        "train_config": config.train_config,
    }
    key = (0, "perceptron", "halfspace", "normal")
    results, failures = _execute([(key, "propositions", payload)], config.jobs)
    outdir = config.outdir
    files = []
    path = os.path.join(outdir, "propositions.csv")
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["check", "value"])
        if key in results:
            for name in sorted(results[key]):
                writer.writerow([name, fmt(results[key][name])])
    files.append(path)
    if failures:
        fpath = os.path.join(outdir, "failures.csv")
        with open(fpath, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["key", "error"])
            for k in sorted(failures):
                writer.writerow([str(k), failures[k]])
        files.append(fpath)
    files.append(_write_manifest(config))
    files.append(_write_summary(config, [], failures))
    return files


# ---------------------------------------------------------------------------
# Manifest + summary + report.

def manifest_payload(config: ExperimentConfig) -> dict:
    """Everything needed to reproduce a run, minus where it lands
    (outdir) and how it is scheduled (jobs), neither of which affects
    output bytes."""
    return {
        "tool": "regionaudit",
        "version": __version__,
        "experiment": config.experiment,
        "seed": config.seed,
        "classifiers": list(config.resolved_classifiers()),
        "mc_samples": config.mc_samples,
        "repetitions": config.repetitions,
        "threshold_count": config.resolved_threshold_count(),
        "users_evaluated": config.users_evaluated,
        "train_config": asdict(config.train_config),
        "dataset_path": config.dataset_path,
    }


def _write_manifest(config: ExperimentConfig) -> str:
    path = os.path.join(config.outdir, "manifest.json")
    with open(path, "w") as fh:
        json.dump(manifest_payload(config), fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path


def config_from_manifest(path, outdir: str, jobs: int = 1) -> ExperimentConfig:
    with open(path) as fh:
        data = json.load(fh)
    train_config = TrainConfig(**{
        k: tuple(v) if isinstance(v, list) else v
        for k, v in data["train_config"].items()
    })
    return ExperimentConfig(
        experiment=data["experiment"],
        outdir=outdir,
        classifiers=tuple(data["classifiers"]),
        seed=data["seed"],
        mc_samples=data["mc_samples"],
        repetitions=data["repetitions"],
        threshold_count=data["threshold_count"],
        users_evaluated=data["users_evaluated"],
        jobs=jobs,
        train_config=train_config,
        dataset_path=data.get("dataset_path"),
    )


def _write_summary(config, units, failures) -> str:
    path = os.path.join(config.outdir, "summary.txt")
    lines = [
        f"experiment: {config.experiment}",
        f"seed: {config.seed}",
        f"classifiers: {', '.join(config.resolved_classifiers())}",
        f"units evaluated: {len(units)}",
        f"failures: {len(failures)}",
    ]
    for name, (columns, rows) in derive_aggregates(config.experiment, units).items():
        lines.append(f"-- {name}")
        for row in rows:
            parts = []
            for c in columns:
                v = row[c]
                parts.append(f"{c}={v}" if isinstance(v, str) else f"{c}={fmt(v)}")
            lines.append("   " + " ".join(parts))
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")
    return path


def rebuild_aggregates(outdir: str):
    """Re-derive aggregate tables from units.csv (the ``report`` verb).

    Writes the same bytes as the original run; used both as a CLI verb
    and as the self-check that aggregates are exact functions of units.
    """
    manifest = os.path.join(outdir, "manifest.json")
    with open(manifest) as fh:
        experiment = json.load(fh)["experiment"]
    units = read_units(os.path.join(outdir, "units.csv"))
    written = []
    for name, (columns, rows) in derive_aggregates(experiment, units).items():
        path = os.path.join(outdir, name)
        _write_table(path, columns, rows)
        written.append(path)
    return written
