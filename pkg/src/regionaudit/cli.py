"""Command line front end.

Subcommands compose into a pipeline: ``generate`` writes a synthetic
population CSV, ``train`` fits one user's verifier from a population,
``measure-ar`` probes a saved model with uniform random vectors,
``evaluate`` runs the full per-user methodology, ``experiment`` runs a
named study end to end, and ``report`` re-derives aggregate tables from
a finished run directory.

Option resolution order: explicit flag > config file (--config) >
environment (REGIONAUDIT_OUT for the output base, REGIONAUDIT_JOBS for
parallelism) > built-in default. Config files are flat key/value text
with '#' comments and dotted keys for nesting, e.g.::

    experiment = mitigation
    seed = 7
    classifiers = linsvm, rndf
    train.svm_c = 10000
    train.hidden_layers = 64, 32
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import replace

from . import __version__
from .classifiers import ALGORITHMS, TrainConfig, load_model, save_model, train
from .dataset import (
    assemble_user_task,
    min_max_normalize,
    read_dataset_csv,
    write_dataset_csv,
)
from .errors import InvalidInputError, RegionAuditError
from .harness import (
    EXPERIMENT_NAMES,
    PROFILES,
    EvalSettings,
    ExperimentConfig,
    config_from_manifest,
    rebuild_aggregates,
    run_experiment,
    run_user_evaluation,
)
from .region import (
    estimate_acceptance_region,
    fmt,
    measure_region_volume,
    threshold_grid,
    write_ar_csv,
    write_curve_csv,
    write_eer_csv,
)
from .synth import (
    FixedVariance,
    PopulationSpec,
    generate_population,
    make_distance_matcher_spec,
)

_OUT_ENV = "REGIONAUDIT_OUT"
_JOBS_ENV = "REGIONAUDIT_JOBS"


def _coerce(text: str):
    s = text.strip()
    if "," in s:
        return tuple(_coerce(part) for part in s.split(","))
    low = s.lower()
    if low in ("true", "yes", "on"):
        return True
    if low in ("false", "no", "off"):
        return False
    if low in ("none", "null", ""):
        return None
    try:
        return int(s)
    except ValueError:
        pass
    try:
        return float(s)
    except ValueError:
        pass
    return s


def load_config(path) -> dict:
    """Flat key/value config: one `key = value` per line, '#' comments,
    dotted keys for nesting, commas for lists."""
    out = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise InvalidInputError(f"{path}:{lineno}: expected key = value")
            key, value = line.split("=", 1)
            out[key.strip()] = _coerce(value)
    return out


class _Resolver:
    """flag > config file > environment > default."""

    def __init__(self, args):
        self.args = args
        self.file = load_config(args.config) if getattr(args, "config", None) else {}

    def get(self, name, default=None, env=None):
        value = getattr(self.args, name.replace(".", "_"), None)
        if value is not None:
            return value
        if name in self.file:
            return self.file[name]
        if env is not None and os.environ.get(env):
            return _coerce(os.environ[env])
        return default

    def out_path(self, leaf: str) -> str:
        explicit = self.get("out")
        if explicit is not None:
            return explicit
        base = os.environ.get(_OUT_ENV, "runs")
        return os.path.join(base, leaf)

    def train_config(self) -> TrainConfig:
        fields = {}
        for key, value in self.file.items():
            if key.startswith("train."):
                name = key[len("train."):]
                if isinstance(value, tuple):
                    value = tuple(int(v) for v in value)
                fields[name] = value
        try:
            return TrainConfig(**fields)
        except TypeError as exc:
            raise InvalidInputError(f"bad train.* config key: {exc}") from exc


def _single_classifier(resolver, default: str) -> str:
    tags = resolver.get("classifier")
    if tags is None:
        value = resolver.file.get("classifiers", default)
        tags = list(value) if isinstance(value, tuple) else [value]
    if len(tags) != 1:
        raise InvalidInputError("this subcommand takes exactly one --classifier")
    return tags[0]


def _ensure_parent(path):
    parent = os.path.dirname(os.path.abspath(path))
    os.makedirs(parent, exist_ok=True)


# ---------------------------------------------------------------------------
# Subcommand bodies.

def _cmd_generate(args) -> int:
    r = _Resolver(args)
    seed = r.get("seed", 0)
    preset = r.get("preset", "standard")
    if preset == "distance":
        spec = make_distance_matcher_spec()
    else:
        spec = PopulationSpec()
    overrides = {}
    if r.get("users") is not None:
        overrides["user_count"] = r.get("users")
    if r.get("features") is not None:
        overrides["feature_count"] = r.get("features")
    if r.get("samples") is not None:
        overrides["samples_per_user"] = r.get("samples")
    if r.get("fixed_sd") is not None:
        overrides["variance_policy"] = FixedVariance(r.get("fixed_sd"))
    if overrides:
        spec = replace(spec, **overrides)
    population = generate_population(spec, seed)
    out = r.out_path("population.csv")
    _ensure_parent(out)
    write_dataset_csv(population.dataset, out)
    print(f"wrote {out}: {spec.user_count} users x {spec.samples_per_user} "
          f"samples x {spec.feature_count} features")
    return 0


def _cmd_train(args) -> int:
    r = _Resolver(args)
    seed = r.get("seed", 0)
    tag = _single_classifier(r, "linsvm")
    raw = read_dataset_csv(args.dataset)
    normalized, _ = min_max_normalize(raw)
    users = normalized.distinct_users()
    target = r.get("user", users[0])
    train_set, test_set = assemble_user_task(normalized, target, seed=seed)
    cfg = replace(r.train_config(), seed=seed)
    model = train(tag, train_set, cfg)
    out = r.out_path("model.npz")
    _ensure_parent(out)
    save_model(model, out)
    print(f"wrote {out}: {tag} for {target} "
          f"({train_set.size} train rows, {test_set.size} held out)")
    if r.get("test_out") is not None:
        _ensure_parent(args.test_out)
        write_dataset_csv(test_set, args.test_out)
        print(f"wrote {args.test_out}")
    return 0


def _cmd_measure_ar(args) -> int:
    r = _Resolver(args)
    model = load_model(args.model)
    grid = threshold_grid(r.get("thresholds", 100))
    estimate = estimate_acceptance_region(
        model, r.get("mc_samples", 1_000_000), r.get("seed", 0), grid
    )
    out = r.out_path("ar.csv")
    _ensure_parent(out)
    write_ar_csv(estimate, out)
    k = (grid == 0.5).nonzero()[0]
    if k.size:
        print(f"wrote {out}: AR at threshold 0.5 = {fmt(estimate.fractions[k[0]])}")
    else:
        print(f"wrote {out}")
    return 0


def _profiled(r):
    name = r.get("profile", "paper")
    if name not in PROFILES:
        raise InvalidInputError(f"unknown profile {name!r}")
    prof = PROFILES[name]
    mc = r.get("mc_samples", prof.mc_samples)
    reps = r.get("reps", prof.repetitions)
    users = r.get("users", prof.users_evaluated)
    return mc, reps, users


def _cmd_evaluate(args) -> int:
    r = _Resolver(args)
    seed = r.get("seed", 0)
    tag = _single_classifier(r, "linsvm")
    mc, reps, _ = _profiled(r)
    if args.dataset is not None:
        raw = read_dataset_csv(args.dataset)
    else:
        raw = generate_population(PopulationSpec(), seed).dataset
    normalized, _ = min_max_normalize(raw)
    target = r.get("user", normalized.distinct_users()[0])
    settings = EvalSettings(
        mc_samples=mc, repetitions=reps,
        threshold_count=r.get("thresholds", 100),
    )
    report = run_user_evaluation(
        normalized, target, tag, settings, r.train_config(), seed
    )
    outdir = r.out_path("evaluate")
    os.makedirs(outdir, exist_ok=True)
    write_curve_csv(report.curve, os.path.join(outdir, "curve.csv"))
    write_eer_csv(report.eer, os.path.join(outdir, "eer.csv"))
    with open(os.path.join(outdir, "reps.csv"), "w") as fh:
        fh.write("rep,frr_fixed,fpr_fixed,ar_fixed\n")
        for i, row in enumerate(report.per_rep_fixed):
            fh.write(f"{i},{fmt(row[0])},{fmt(row[1])},{fmt(row[2])}\n")
    with open(os.path.join(outdir, "volumes.csv"), "w") as fh:
        fh.write("pos_log10_volume,neg_log10_volume\n")
        fh.write(f"{fmt(report.pos_log10_volume)},{fmt(report.neg_log10_volume)}\n")
    eer = report.eer
    print(f"wrote {outdir}: {tag}/{target} EER threshold {fmt(eer.threshold)} "
          f"FPR {fmt(eer.fpr)} AR {fmt(eer.ar)}")
    return 0


def _cmd_experiment(args) -> int:
    r = _Resolver(args)
    outdir = r.out_path(args.name)
    jobs = r.get("jobs", 1, env=_JOBS_ENV)
    if args.from_manifest is not None:
        config = config_from_manifest(args.from_manifest, outdir, jobs=jobs)
    else:
        mc, reps, users = _profiled(r)
        tags = r.get("classifier")
        if tags is None:
            value = r.file.get("classifiers")
            tags = list(value) if isinstance(value, tuple) else (
                [value] if value else [])
        config = ExperimentConfig(
            experiment=args.name,
            outdir=outdir,
            classifiers=tuple(tags),
            seed=r.get("seed", 0),
            mc_samples=mc,
            repetitions=reps,
            threshold_count=r.get("thresholds"),
            users_evaluated=users,
            jobs=jobs,
            train_config=r.train_config(),
            dataset_path=args.dataset,
        )
    files = run_experiment(config)
    for path in files:
        print(f"wrote {path}")
    return 0


def _cmd_report(args) -> int:
    for path in rebuild_aggregates(args.rundir):
        print(f"wrote {path}")
    return 0


def _cmd_volume(args) -> int:
    """Binned true-region volume of one user's rows in a dataset CSV."""
    r = _Resolver(args)
    raw = read_dataset_csv(args.dataset)
    normalized, _ = min_max_normalize(raw)
    target = r.get("user", normalized.distinct_users()[0])
    rows = normalized.features[normalized.user_ids == target]
    report = measure_region_volume(rows, mode=r.get("mode", "binned"))
    print(f"{target}: log10 volume {fmt(report.log10_volume)} "
          f"({report.mode}, {report.bin_count} bins)")
    return 0


# ---------------------------------------------------------------------------
# Parser assembly.

def _add_common(parser):
    parser.add_argument("--seed", type=int, help="master seed (default 0)")
    parser.add_argument("--out", help=f"output path (default under ${_OUT_ENV} or runs/)")
    parser.add_argument("--config", help="flat key/value config file")
    parser.add_argument("--profile", choices=sorted(PROFILES),
                        help="scale preset: quick or paper (default paper)")
    parser.add_argument("--mc-samples", type=int, dest="mc_samples",
                        help="uniform probe vectors per estimate")
    parser.add_argument("--reps", type=int, help="repetitions to average")
    parser.add_argument("--thresholds", type=int, help="threshold grid size")
    parser.add_argument("--classifier", action="append", choices=list(ALGORITHMS),
                        help="classifier tag (repeatable where a list applies)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="regionaudit",
        description="Acceptance-region measurement for verification classifiers.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="write a synthetic population CSV")
    _add_common(p)
    p.add_argument("--preset", choices=("standard", "distance"))
    p.add_argument("--users", type=int)
    p.add_argument("--features", type=int)
    p.add_argument("--samples", type=int, help="samples per user")
    p.add_argument("--fixed-sd", type=float, dest="fixed_sd",
                   help="per-sample SD for the fixed-variance policy")
    p.set_defaults(func=_cmd_generate)

    p = sub.add_parser("train", help="fit one user's verifier from a dataset CSV")
    _add_common(p)
    p.add_argument("--dataset", required=True)
    p.add_argument("--user", help="target user id (default: first)")
    p.add_argument("--test-out", dest="test_out", help="write the held-out split here")
    p.set_defaults(func=_cmd_train)

    p = sub.add_parser("measure-ar", help="probe a saved model with random vectors")
    _add_common(p)
    p.add_argument("--model", required=True)
    p.set_defaults(func=_cmd_measure_ar)

    p = sub.add_parser("evaluate", help="full per-user methodology run")
    _add_common(p)
    p.add_argument("--dataset", help="population CSV (default: synthesize)")
    p.add_argument("--user", help="target user id (default: first)")
    p.set_defaults(func=_cmd_evaluate)

    p = sub.add_parser("experiment", help="run a named study end to end")
    _add_common(p)
    p.add_argument("name", choices=EXPERIMENT_NAMES)
    p.add_argument("--users", type=int, help="evaluate only the first K users")
    p.add_argument("--jobs", type=int, help=f"worker processes (default ${_JOBS_ENV} or 1)")
    p.add_argument("--dataset", help="population CSV for single-population studies")
    p.add_argument("--from-manifest", dest="from_manifest",
                   help="reproduce a run from its manifest.json")
    p.set_defaults(func=_cmd_experiment)

    p = sub.add_parser("report", help="re-derive aggregate tables from a run dir")
    p.add_argument("rundir")
    p.set_defaults(func=_cmd_report)

    p = sub.add_parser("volume", help="binned true-region volume for one user")
    _add_common(p)
    p.add_argument("--dataset", required=True)
    p.add_argument("--user")
    p.add_argument("--mode", choices=("binned", "span"))
    p.set_defaults(func=_cmd_volume)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (RegionAuditError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
