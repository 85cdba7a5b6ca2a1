import filecmp
import os

import numpy as np
import pytest

from regionaudit.cli import _coerce, load_config, main
from regionaudit.classifiers import load_model
from regionaudit.dataset import read_dataset_csv
from regionaudit.errors import InvalidInputError


def test_coerce_types():
    assert _coerce("7") == 7
    assert _coerce("0.25") == 0.25
    assert _coerce("true") is True
    assert _coerce("OFF") is False
    assert _coerce("none") is None
    assert _coerce("linsvm") == "linsvm"
    assert _coerce("linsvm, rndf") == ("linsvm", "rndf")
    assert _coerce("64, 32") == (64, 32)


def test_load_config(tmp_path):
    path = tmp_path / "run.conf"
    path.write_text(
        "# comment line\n"
        "experiment = mitigation\n"
        "seed = 7          # trailing comment\n"
        "classifiers = linsvm, rndf\n"
        "train.svm_c = 10000\n"
        "\n"
        "train.hidden_layers = 8, 4\n"
    )
    config = load_config(path)
    assert config == {
        "experiment": "mitigation",
        "seed": 7,
        "classifiers": ("linsvm", "rndf"),
        "train.svm_c": 10000,
        "train.hidden_layers": (8, 4),
    }


def test_load_config_rejects_bare_lines(tmp_path):
    path = tmp_path / "bad.conf"
    path.write_text("just some words\n")
    with pytest.raises(InvalidInputError):
        load_config(path)


def test_version_flag(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["--version"])
    assert exc.value.code == 0


def _run(args):
    return main(args)


def test_pipeline_generate_train_measure(tmp_path, capsys):
    data = tmp_path / "pop.csv"
    rc = _run([
        "generate", "--users", "6", "--features", "6", "--samples", "24",
        "--seed", "2", "--out", str(data),
    ])
    assert rc == 0
    pop = read_dataset_csv(data)
    assert pop.size == 144
    assert pop.feature_count == 6

    model_path = tmp_path / "model.npz"
    test_path = tmp_path / "heldout.csv"
    rc = _run([
        "train", "--dataset", str(data), "--user", "u003",
        "--classifier", "cosine", "--seed", "4",
        "--out", str(model_path), "--test-out", str(test_path),
    ])
    assert rc == 0
    model = load_model(model_path)
    assert model.algorithm == "cosine"
    heldout = read_dataset_csv(test_path)
    assert set(np.unique(heldout.labels)) == {-1, 1}

    ar_path = tmp_path / "ar.csv"
    rc = _run([
        "measure-ar", "--model", str(model_path), "--mc-samples", "5000",
        "--thresholds", "100", "--seed", "1", "--out", str(ar_path),
    ])
    assert rc == 0
    out = capsys.readouterr().out
    assert "AR at threshold 0.5" in out
    with open(ar_path) as fh:
        assert fh.readline().strip() == "threshold,ar,stderr"
        assert sum(1 for _ in fh) == 100


def test_evaluate_writes_report_files(tmp_path):
    data = tmp_path / "pop.csv"
    _run(["generate", "--users", "5", "--features", "5", "--samples", "20",
          "--seed", "3", "--out", str(data)])
    outdir = tmp_path / "eval"
    rc = _run([
        "evaluate", "--dataset", str(data), "--user", "u001",
        "--classifier", "cosine", "--mc-samples", "2000", "--reps", "2",
        "--seed", "5", "--out", str(outdir),
    ])
    assert rc == 0
    for name in ("curve.csv", "eer.csv", "reps.csv", "volumes.csv"):
        assert (outdir / name).exists(), name
    with open(outdir / "curve.csv") as fh:
        assert fh.readline().strip() == "threshold,frr,fpr,ar"
    with open(outdir / "reps.csv") as fh:
        assert fh.readline().strip() == "rep,frr_fixed,fpr_fixed,ar_fixed"
        assert sum(1 for _ in fh) == 2


def test_experiment_quick_profile_and_report(tmp_path):
    outdir = tmp_path / "exp"
    rc = _run([
        "experiment", "propositions", "--profile", "quick",
        "--mc-samples", "20000", "--seed", "1", "--out", str(outdir),
    ])
    assert rc == 0
    assert (outdir / "propositions.csv").exists()
    assert (outdir / "manifest.json").exists()


def test_experiment_with_dataset_then_report_round_trip(tmp_path):
    data = tmp_path / "pop.csv"
    _run(["generate", "--users", "5", "--features", "5", "--samples", "20",
          "--seed", "6", "--out", str(data)])
    outdir = tmp_path / "exp"
    rc = _run([
        "experiment", "per-user-ar", "--dataset", str(data),
        "--classifier", "cosine", "--users", "2", "--reps", "1",
        "--mc-samples", "500", "--seed", "2", "--out", str(outdir),
    ])
    assert rc == 0
    contrast = outdir / "contrast.csv"
    before = contrast.read_bytes()
    rc = _run(["report", str(outdir)])
    assert rc == 0
    assert contrast.read_bytes() == before


def test_volume_subcommand(tmp_path, capsys):
    data = tmp_path / "pop.csv"
    _run(["generate", "--users", "4", "--features", "3", "--samples", "30",
          "--seed", "9", "--out", str(data)])
    rc = _run(["volume", "--dataset", str(data), "--user", "u002"])
    assert rc == 0
    out = capsys.readouterr().out
    assert "u002: log10 volume" in out
    rc = _run(["volume", "--dataset", str(data), "--user", "u002", "--mode", "span"])
    assert rc == 0
    assert "span" in capsys.readouterr().out


def test_config_file_feeds_experiment(tmp_path):
    conf = tmp_path / "run.conf"
    conf.write_text(
        "seed = 4\n"
        "mc_samples = 20000\n"
        "reps = 1\n"
        "train.perceptron_epochs = 10\n"
    )
    outdir = tmp_path / "exp"
    rc = _run([
        "experiment", "propositions", "--config", str(conf), "--out", str(outdir),
    ])
    assert rc == 0
    import json

    with open(outdir / "manifest.json") as fh:
        manifest = json.load(fh)
    assert manifest["seed"] == 4
    assert manifest["mc_samples"] == 20000
    assert manifest["train_config"]["perceptron_epochs"] == 10


def test_flag_beats_config_file(tmp_path):
    conf = tmp_path / "run.conf"
    conf.write_text("seed = 4\nmc_samples = 20000\nreps = 1\n")
    outdir = tmp_path / "exp"
    rc = _run([
        "experiment", "propositions", "--config", str(conf), "--seed", "11",
        "--out", str(outdir),
    ])
    assert rc == 0
    import json

    with open(outdir / "manifest.json") as fh:
        assert json.load(fh)["seed"] == 11


def test_out_env_sets_default_location(tmp_path, monkeypatch):
    monkeypatch.setenv("REGIONAUDIT_OUT", str(tmp_path / "base"))
    monkeypatch.chdir(tmp_path)
    rc = _run(["generate", "--users", "3", "--features", "2", "--samples", "10",
               "--seed", "0"])
    assert rc == 0
    assert (tmp_path / "base" / "population.csv").exists()


def test_jobs_env_respected(tmp_path, monkeypatch):
    # worker count must not change output bytes
    data = tmp_path / "pop.csv"
    _run(["generate", "--users", "5", "--features", "4", "--samples", "16",
          "--seed", "1", "--out", str(data)])
    args = [
        "experiment", "per-user-ar", "--dataset", str(data),
        "--classifier", "cosine", "--users", "2", "--reps", "1",
        "--mc-samples", "500", "--seed", "3",
    ]
    out_serial = tmp_path / "serial"
    rc = _run(args + ["--out", str(out_serial)])
    assert rc == 0
    monkeypatch.setenv("REGIONAUDIT_JOBS", "2")
    out_pool = tmp_path / "pool"
    rc = _run(args + ["--out", str(out_pool)])
    assert rc == 0
    for name in ("units.csv", "contrast.csv", "scatter.csv", "manifest.json"):
        assert filecmp.cmp(out_serial / name, out_pool / name, shallow=False), name


def test_errors_exit_code_two(tmp_path, capsys):
    rc = _run(["train", "--dataset", str(tmp_path / "missing.csv"),
               "--classifier", "cosine", "--out", str(tmp_path / "m.npz")])
    assert rc == 2  # missing input file
    data = tmp_path / "pop.csv"
    _run(["generate", "--users", "3", "--features", "2", "--samples", "10",
          "--seed", "0", "--out", str(data)])
    capsys.readouterr()
    rc = _run(["train", "--dataset", str(data), "--user", "ghost",
               "--classifier", "cosine", "--out", str(tmp_path / "m.npz")])
    assert rc == 2
    assert "error:" in capsys.readouterr().err
