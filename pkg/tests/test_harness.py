"""Harness: config grammar, persistence, reproducibility, CLI surface."""

import json
import os
import subprocess
import sys

import pytest

from purestat.experiments import EXPERIMENTS, experiment_ids
from purestat.harness import (
    ExperimentSpec,
    parse_config,
    run_experiment,
    summarize,
)


def test_parse_config(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text(
        "# comment line\n"
        "experiment = LEVY\n"
        "seed = 11\n"
        "n_samples = 500\n"
        "epsilon = 0.25\n"
        "dims = 2,32\n"
        "\n"
        "out = results\n",
        encoding="utf-8")
    parsed = parse_config(str(cfg))
    assert parsed["experiment"] == "LEVY"
    assert parsed["seed"] == 11
    assert parsed["n_samples"] == 500
    assert parsed["epsilon"] == 0.25
    assert parsed["dims"] == [2, 32]
    assert parsed["out"] == "results"


def test_parse_config_rejects_garbage(tmp_path):
    bad = tmp_path / "bad.cfg"
    bad.write_text("this is not a key value line\n", encoding="utf-8")
    with pytest.raises(ValueError, match="expected"):
        parse_config(str(bad))


def test_spec_validation():
    with pytest.raises(ValueError, match="invalid experiment_id"):
        ExperimentSpec("NOT_AN_EXPERIMENT")
    with pytest.raises(ValueError, match="memory guard"):
        ExperimentSpec("DEFF_SUBSPACE_MEAN", {"d_r": 2048, "ambient": 4096})
    with pytest.raises(ValueError, match="trials"):
        ExperimentSpec("LEVY", {"trials": 0})


def test_defaults_are_merged():
    spec = ExperimentSpec("LEVY", {"epsilon": 0.3})
    assert spec.params["epsilon"] == 0.3
    assert spec.params["n_samples"] == EXPERIMENTS["LEVY"].defaults["n_samples"]


def test_run_persists_and_reruns_identically(tmp_path):
    out1, out2 = tmp_path / "a", tmp_path / "b"
    spec1 = ExperimentSpec("COMMUTATOR_LOWER", {"trials": 20}, seed=5, out_dir=str(out1))
    spec2 = ExperimentSpec("COMMUTATOR_LOWER", {"trials": 20}, seed=5, out_dir=str(out2))
    r1, r2 = run_experiment(spec1), run_experiment(spec2)
    csv1 = (out1 / "COMMUTATOR_LOWER.csv").read_bytes()
    csv2 = (out2 / "COMMUTATOR_LOWER.csv").read_bytes()
    assert csv1 == csv2
    assert r1.manifest["manifest_hash"] == r2.manifest["manifest_hash"]
    assert r1.manifest["spec_hash"] == r2.manifest["spec_hash"]
    man = json.loads((out1 / "COMMUTATOR_LOWER_manifest.json").read_text())
    assert man["seed"] == 5 and man["experiment_id"] == "COMMUTATOR_LOWER"


def test_different_seed_changes_results(tmp_path):
    out1, out2 = tmp_path / "a", tmp_path / "b"
    run_experiment(ExperimentSpec("COMMUTATOR_LOWER", {"trials": 10}, seed=5,
                                  out_dir=str(out1)))
    run_experiment(ExperimentSpec("COMMUTATOR_LOWER", {"trials": 10}, seed=6,
                                  out_dir=str(out2)))
    assert (out1 / "COMMUTATOR_LOWER.csv").read_bytes() \
        != (out2 / "COMMUTATOR_LOWER.csv").read_bytes()


def test_worker_count_does_not_change_bytes(tmp_path):
    """Byte-identical CSVs under 1 worker and N workers (fresh processes)."""
    outs = {}
    for workers in ("1", "3"):
        out = tmp_path / f"w{workers}"
        code = (
            "from purestat.harness import ExperimentSpec, run_experiment;"
            f"run_experiment(ExperimentSpec('DEFF_SUBSPACE_MEAN', {{'d_r': 16, "
            f"'trials': 64}}, seed=9, out_dir={str(out)!r}))")
        env = dict(os.environ, PURESTAT_WORKERS=workers)
        subprocess.run([sys.executable, "-c", code], check=True, env=env,
                       capture_output=True)
        outs[workers] = (out / "DEFF_SUBSPACE_MEAN.csv").read_bytes()
    assert outs["1"] == outs["3"]


def test_csv_schema(tmp_path):
    out = tmp_path / "r"
    run_experiment(ExperimentSpec("LEVY", {"n_samples": 500}, seed=3, out_dir=str(out)))
    lines = (out / "LEVY.csv").read_text(encoding="utf-8").split("\n")
    assert lines[0] == "experiment_id,trial,lhs,stderr,rhs,satisfied,vacuous"
    first = lines[1].split(",")
    assert first[0] == "LEVY" and first[1] == "0"
    assert first[5] in ("true", "false") and first[6] in ("true", "false")


def test_summarize_directory_and_missing(tmp_path):
    out = tmp_path / "r"
    run_experiment(ExperimentSpec("LEVY", {"n_samples": 500}, seed=3, out_dir=str(out)))
    run_experiment(ExperimentSpec("COMMUTATOR_LOWER", {"trials": 5}, seed=3,
                                  out_dir=str(out)))
    run_experiment(ExperimentSpec("ENTANGLED_EIGS_TAIL", {"trials": 2}, seed=3,
                                  out_dir=str(out)))
    rows = summarize(str(out))
    assert len(rows) == 3  # one summary row per experiment
    assert {r["experiment_id"] for r in rows} \
        == {"LEVY", "COMMUTATOR_LOWER", "ENTANGLED_EIGS_TAIL"}
    assert all("violations" in r for r in rows)
    assert (out / "summary.csv").exists()
    empty = tmp_path / "empty"
    empty.mkdir()
    with pytest.raises(FileNotFoundError, match="missing result files"):
        summarize(str(empty))


def test_experiment_ids_cover_demos():
    ids = experiment_ids()
    for required in ("EINSELECTION_DEMO", "SECOND_LAW_DEMO", "DISTANCE_TRAJECTORY"):
        assert required in ids


def _cli(*args, env=None):
    cmd = [sys.executable, "-m", "purestat.cli", *args]
    return subprocess.run(cmd, capture_output=True, text=True,
                          env=dict(os.environ, **(env or {})))


def test_cli_list():
    res = _cli("list")
    assert res.returncode == 0
    assert "MC_VARIANCE_IDENTITY" in res.stdout
    assert "LEVY" in res.stdout
    assert "1/(9 pi^3)" in res.stdout


def test_cli_run_and_report(tmp_path):
    cfg = tmp_path / "levy.cfg"
    cfg.write_text("experiment = LEVY\nn_samples = 500\nseed = 4\n", encoding="utf-8")
    out = tmp_path / "results"
    res = _cli("run", "--config", str(cfg), "--out", str(out))
    assert res.returncode == 0, res.stderr
    assert (out / "LEVY.csv").exists()
    rep = _cli("report", "--in", str(out))
    assert rep.returncode == 0, rep.stderr
    assert "LEVY" in rep.stdout
    assert "total non-vacuous violations: 0" in rep.stdout


def test_cli_seed_override_changes_output(tmp_path):
    cfg = tmp_path / "c.cfg"
    cfg.write_text("experiment = COMMUTATOR_LOWER\ntrials = 5\nseed = 4\n",
                   encoding="utf-8")
    out1, out2 = tmp_path / "r1", tmp_path / "r2"
    assert _cli("run", "--config", str(cfg), "--out", str(out1)).returncode == 0
    assert _cli("run", "--config", str(cfg), "--out", str(out2),
                "--seed", "99").returncode == 0
    assert (out1 / "COMMUTATOR_LOWER.csv").read_bytes() \
        != (out2 / "COMMUTATOR_LOWER.csv").read_bytes()


def test_trajectory_artifact_schema(tmp_path):
    out = tmp_path / "r"
    run_experiment(ExperimentSpec("DISTANCE_TRAJECTORY", {"n_times": 200, "n_grid": 50},
                                  seed=7, out_dir=str(out)))
    lines = (out / "DISTANCE_TRAJECTORY_trajectory.csv").read_text().strip().split("\n")
    assert lines[0] == "t,distance,bound"
    ts = [float(line.split(",")[0]) for line in lines[1:]]
    assert all(b > a for a, b in zip(ts, ts[1:]))  # monotone time column
