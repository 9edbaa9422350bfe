"""Seeded experiment runner: worker pool, CSV/JSON persistence, summaries.

Reproducibility contract: a (config, seed) pair produces byte-identical
per-trial CSV files, regardless of the worker count (trials own their RNG
streams; results are written in trial order).  The manifest carries a
deterministic hash over everything that defines the run; wall time is
recorded outside the hashed payload.
"""

from __future__ import annotations

import csv
import hashlib
import json
import os
import time
from dataclasses import dataclass, field

from . import __version__
from .experiments import EXPERIMENTS, TrialRecord, experiment_ids

__all__ = [
    "ExperimentSpec",
    "ExperimentResult",
    "parse_config",
    "run_experiment",
    "run_einselection_demo",
    "run_suite",
    "summarize",
    "worker_count",
]

MAX_DIMENSION = 1024
_SETUP_CACHE: dict = {}

CSV_COLUMNS = ["experiment_id", "trial", "lhs", "stderr", "rhs", "satisfied", "vacuous"]


@dataclass
class ExperimentSpec:
    """A named experiment plus its parameters, seed and output directory."""

    experiment_id: str
    params: dict = field(default_factory=dict)
    seed: int = 7
    out_dir: str | None = None

    def __post_init__(self):
        if self.experiment_id not in EXPERIMENTS:
            raise ValueError(f"invalid experiment_id {self.experiment_id!r}; "
                             f"known: {', '.join(experiment_ids())}")
        merged = dict(EXPERIMENTS[self.experiment_id].defaults)
        merged.update(self.params)
        self.params = merged
        if int(self.params.get("trials", 1)) < 1:
            raise ValueError("trials must be >= 1")
        dim = 1
        for key in ("d", "ambient"):
            if self.params.get(key):
                dim = max(dim, int(self.params[key]))
        if self.params.get("d_s") and self.params.get("d_b"):
            dim = max(dim, int(self.params["d_s"]) * int(self.params["d_b"]))
        if dim > MAX_DIMENSION:
            raise ValueError(f"dimension {dim} exceeds the memory guard {MAX_DIMENSION}")

    def spec_hash(self) -> str:
        payload = json.dumps({"experiment_id": self.experiment_id, "seed": self.seed,
                              "params": self.params}, sort_keys=True, default=repr)
        return hashlib.sha256(payload.encode()).hexdigest()


@dataclass
class ExperimentResult:
    spec: ExperimentSpec
    records: list
    summary: dict
    manifest: dict
    files: dict

    @property
    def violations(self) -> int:
        return self.summary["violations"]


def worker_count() -> int:
    return max(1, int(os.environ.get("PURESTAT_WORKERS", "1")))


def _run_chunk(args) -> list[tuple]:
    experiment_id, params, seed, start, stop = args
    exp = EXPERIMENTS[experiment_id]
    key = (experiment_id, seed, json.dumps(params, sort_keys=True, default=repr))
    if key not in _SETUP_CACHE:
        _SETUP_CACHE[key] = exp.setup(params, seed) if exp.setup else None
    setup = _SETUP_CACHE[key]
    out = []
    for k in range(start, stop):
        rec = exp.trial(setup, params, seed, k)
        if isinstance(rec, TrialRecord):
            rec = [rec]
        for r in rec:
            out.append((r.trial, r.lhs, r.stderr, r.rhs, r.satisfied, r.vacuous, r.extra))
    return out


def _collect_records(spec: ExperimentSpec) -> tuple[list[TrialRecord], object]:
    exp = EXPERIMENTS[spec.experiment_id]
    trials = int(spec.params.get("trials", 1))
    workers = worker_count() if exp.parallel else 1
    if workers > 1 and trials > 1:
        import multiprocessing as mp

        n_chunks = min(trials, 4 * workers)
        bounds = [round(i * trials / n_chunks) for i in range(n_chunks + 1)]
        jobs = [(spec.experiment_id, spec.params, spec.seed, a, b)
                for a, b in zip(bounds[:-1], bounds[1:]) if b > a]
        with mp.get_context("fork").Pool(workers) as pool:
            chunks = pool.map(_run_chunk, jobs)
        raw = [t for chunk in chunks for t in chunk]
    else:
        raw = _run_chunk((spec.experiment_id, spec.params, spec.seed, 0, trials))
    records = [TrialRecord(*t[:6], extra=t[6]) for t in raw]
    if not exp.parallel:
        for i, r in enumerate(records):  # demos emit several rows per trial
            r.trial = i
    key = (spec.experiment_id, spec.seed, json.dumps(spec.params, sort_keys=True, default=repr))
    if key not in _SETUP_CACHE:
        _SETUP_CACHE[key] = exp.setup(spec.params, spec.seed) if exp.setup else None
    return records, _SETUP_CACHE[key]


def _summarize_records(records, gates) -> dict:
    import numpy as np

    lhs = np.array([r.lhs for r in records], dtype=float)
    finite = lhs[np.isfinite(lhs)]
    n = len(finite)
    mean = float(finite.mean()) if n else float("nan")
    se = float(finite.std(ddof=1) / np.sqrt(n)) if n > 1 else 0.0
    trial_violations = sum(1 for r in records if not r.satisfied and not r.vacuous)
    gate_violations = sum(1 for g in gates if not g["satisfied"] and not g.get("vacuous"))
    boot = None
    if n > 1:
        rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(0)))
        ms = np.empty(200)
        for b in range(200):
            ms[b] = finite[rng.integers(0, n, size=n)].mean()
        boot = [float(np.percentile(ms, 2.5)), float(np.percentile(ms, 97.5))]
    return {
        "rows": len(records),
        "mean_lhs": mean,
        "stderr_lhs": se,
        "bootstrap_ci95_mean_lhs": boot,
        "violations": trial_violations + gate_violations,
        "trial_violations": trial_violations,
        "vacuous_rows": sum(1 for r in records if r.vacuous),
        "gates": gates,
    }


def _write_csv(path: str, experiment_id: str, records) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for r in records:
            w.writerow([experiment_id, r.trial, repr(float(r.lhs)), repr(float(r.stderr)),
                        repr(float(r.rhs)), str(bool(r.satisfied)).lower(),
                        str(bool(r.vacuous)).lower()])


def run_experiment(spec: ExperimentSpec) -> ExperimentResult:
    """Run one named experiment; persist results before returning."""
    t0 = time.monotonic()
    exp = EXPERIMENTS[spec.experiment_id]
    records, setup = _collect_records(spec)
    gates = exp.summary(records, setup, spec.params) if exp.summary else []
    summary = _summarize_records(records, gates)

    files: dict[str, str] = {}
    manifest = {
        "experiment_id": spec.experiment_id,
        "description": exp.description,
        "seed": spec.seed,
        "params": spec.params,
        "spec_hash": spec.spec_hash(),
        "code_version": __version__,
        "summary": summary,
        "extras": [r.extra for r in records if r.extra],
    }
    manifest["manifest_hash"] = hashlib.sha256(
        json.dumps(manifest, sort_keys=True, default=repr).encode()).hexdigest()
    manifest["wall_time_s"] = round(time.monotonic() - t0, 3)

    if spec.out_dir:
        os.makedirs(spec.out_dir, exist_ok=True)
        csv_path = os.path.join(spec.out_dir, f"{spec.experiment_id}.csv")
        _write_csv(csv_path, spec.experiment_id, records)
        files["csv"] = csv_path
        if exp.artifacts:
            files.update(exp.artifacts(setup, spec.params, spec.seed, spec.out_dir))
        manifest["files"] = files
        man_path = os.path.join(spec.out_dir, f"{spec.experiment_id}_manifest.json")
        with open(man_path, "w", encoding="utf-8") as fh:
            json.dump(manifest, fh, indent=1, sort_keys=True, default=repr)
            fh.write("\n")
        files["manifest"] = man_path
    return ExperimentResult(spec, records, summary, manifest, files)


def run_einselection_demo(spec: ExperimentSpec | None = None, seed: int = 7,
                          out_dir: str | None = None) -> ExperimentResult:
    """Run the pointer-basis decoherence demo (frozen diagonals, suppression
    factors, weak-coupling slow-states variant)."""
    if spec is None:
        spec = ExperimentSpec("EINSELECTION_DEMO", seed=seed, out_dir=out_dir)
    if spec.experiment_id != "EINSELECTION_DEMO":
        raise ValueError("run_einselection_demo needs an EINSELECTION_DEMO spec")
    return run_experiment(spec)


def run_suite(seed: int = 7, out_dir: str | None = None,
              overrides: dict | None = None) -> list[ExperimentResult]:
    """Run every registered experiment at its defaults (the default suite)."""
    results = []
    for experiment_id in experiment_ids():
        spec = ExperimentSpec(experiment_id, dict(overrides or {}), seed=seed,
                              out_dir=out_dir)
        results.append(run_experiment(spec))
    return results


def summarize(results_or_dir) -> list[dict]:
    """Summary rows (one per experiment) from results or a results directory.

    When given a directory, reads the *_manifest.json files; raises if none
    are present.  When an output directory is involved, also writes
    summary.csv next to the manifests.
    """
    rows = []
    out_dir = None
    if isinstance(results_or_dir, (str, os.PathLike)):
        out_dir = str(results_or_dir)
        manifests = sorted(f for f in os.listdir(out_dir) if f.endswith("_manifest.json"))
        if not manifests:
            raise FileNotFoundError(f"missing result files: no manifests in {out_dir!r}")
        payloads = []
        for name in manifests:
            with open(os.path.join(out_dir, name), encoding="utf-8") as fh:
                payloads.append(json.load(fh))
    else:
        payloads = [r.manifest for r in results_or_dir]
        dirs = {r.spec.out_dir for r in results_or_dir if r.spec.out_dir}
        out_dir = dirs.pop() if len(dirs) == 1 else None
    for m in payloads:
        s = m["summary"]
        # wall time stays in the manifest only: summary.csv must be
        # byte-identical across reruns like every other CSV output
        rows.append({
            "experiment_id": m["experiment_id"],
            "rows": s["rows"],
            "violations": s["violations"],
            "vacuous_rows": s["vacuous_rows"],
            "mean_lhs": s["mean_lhs"],
            "stderr_lhs": s["stderr_lhs"],
            "seed": m["seed"],
        })
    if out_dir:
        path = os.path.join(out_dir, "summary.csv")
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.DictWriter(fh, fieldnames=list(rows[0].keys()), lineterminator="\n")
            w.writeheader()
            w.writerows(rows)
    return rows


def parse_config(path: str) -> dict:
    """Flat key-value config: one `key = value` per line, # comments,
    comma-separated lists.  Values are parsed as int, then float, then kept
    as strings; lists become lists of the same."""
    cfg: dict = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected 'key = value'")
            key, _, raw = line.partition("=")
            key, raw = key.strip(), raw.strip()
            if "," in raw:
                cfg[key] = [_parse_scalar(v.strip()) for v in raw.split(",")]
            else:
                cfg[key] = _parse_scalar(raw)
    return cfg


def _parse_scalar(raw: str):
    for cast in (int, float):
        try:
            return cast(raw)
        except ValueError:
            continue
    return raw
