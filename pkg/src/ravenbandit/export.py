"""Bit-exact CSV export of experiment results.

Schemas (column names and order) are fixed and covered by tests:

    summary.csv   policy,metric,mean,stddev,n_trials
    curves.csv    policy,trial,step,cum_regret,cum_reward
    trials.csv    policy,trial,cum_reward,cum_regret,suboptimal_pulls,seed
    sweep.csv     scenario,horizon,alpha0,beta0,mean_regret,std_regret
    scaling.csv   horizon,policy,mean_regret,mean_suboptimal_pulls,reduction_pct
    tune.csv      candidate,alpha0,beta0,epsilon,mean_regret,std_regret
    moments.csv   sample_size,trial,mean,variance

Floats carry 17 significant digits (lossless for float64), newlines are
LF, rows are emitted in a deterministic order (policy name, then trial,
then step), so reruns of the same config are byte-identical. Wall-clock
timings, which can never be deterministic, go to timings.txt instead.
"""

from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

from .harness import ExperimentResult, RegretScalingReport
from .sweep import SweepResult, TuneResult


def fmt(value) -> str:
    """17-significant-digit decimal for floats, plain digits for ints."""
    if isinstance(value, (bool, np.bool_)):
        raise TypeError("booleans have no CSV representation here")
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return f"{float(value):.17g}"


def _write_csv(path: Path, header: list[str], rows) -> Path:
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([fmt(v) if not isinstance(v, str) else v for v in row])
    return path


def write_experiment(result: ExperimentResult, outdir) -> list[Path]:
    """summary.csv, curves.csv and trials.csv for one experiment."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    names = sorted(result.policy_names)
    summary = result.summary()

    summary_rows = [
        (name, metric, summary[name][metric][0], summary[name][metric][1], result.n_trials)
        for name in names
        for metric in ("cum_regret", "cum_reward", "suboptimal_pulls")
    ]
    curve_rows = [
        (name, trial, int(step), float(result.regret_curves[name][trial, j]),
         float(result.reward_curves[name][trial, j]))
        for name in names
        for trial in range(result.n_trials)
        for j, step in enumerate(result.checkpoint_steps)
    ]
    trial_rows = [
        (name, s.trial, s.cum_reward, s.cum_regret, s.suboptimal_pulls, s.seed)
        for name in names
        for s in result.trials[name]
    ]

    paths = [
        _write_csv(outdir / "summary.csv",
                   ["policy", "metric", "mean", "stddev", "n_trials"], summary_rows),
        _write_csv(outdir / "curves.csv",
                   ["policy", "trial", "step", "cum_regret", "cum_reward"], curve_rows),
        _write_csv(outdir / "trials.csv",
                   ["policy", "trial", "cum_reward", "cum_regret", "suboptimal_pulls", "seed"],
                   trial_rows),
    ]
    timings = outdir / "timings.txt"
    with open(timings, "w", encoding="utf-8") as f:
        for name in names:
            f.write(f"{name}\tmean_trial_seconds={result.runtimes.get(name, float('nan')):.6f}\n")
    return paths


def write_sweep(result: SweepResult, outdir) -> list[Path]:
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    rows = [
        (c.scenario, c.horizon, c.alpha0, c.beta0, c.mean_regret, c.std_regret)
        for c in result.rows
    ]
    return [
        _write_csv(outdir / "sweep.csv",
                   ["scenario", "horizon", "alpha0", "beta0", "mean_regret", "std_regret"], rows)
    ]


def write_scaling(report: RegretScalingReport, outdir) -> list[Path]:
    """scaling.csv; baseline rows carry a reduction of 0 (self-comparison)."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    rows = []
    for i, horizon in enumerate(report.horizons):
        per_policy = {
            report.candidate: report.reduction_pct[i],
            report.baseline: 0.0,
        }
        for name in sorted(per_policy):
            rows.append((
                horizon, name,
                report.mean_regret[name][i],
                report.mean_suboptimal[name][i],
                per_policy[name],
            ))
    return [
        _write_csv(outdir / "scaling.csv",
                   ["horizon", "policy", "mean_regret", "mean_suboptimal_pulls", "reduction_pct"],
                   rows)
    ]


def write_tune(result: TuneResult, outdir) -> list[Path]:
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    rows = [
        (c.index, c.alpha0, c.beta0, c.epsilon, c.mean_regret, c.std_regret)
        for c in result.candidates
    ]
    return [
        _write_csv(outdir / "tune.csv",
                   ["candidate", "alpha0", "beta0", "epsilon", "mean_regret", "std_regret"], rows)
    ]


def write_moments(rows, outdir) -> list[Path]:
    """moments.csv rows: (sample_size, trial, mean, variance)."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    return [
        _write_csv(outdir / "moments.csv",
                   ["sample_size", "trial", "mean", "variance"], rows)
    ]


def export_results(result, outdir) -> list[Path]:
    """Write the CSV files appropriate to the result's type."""
    if isinstance(result, ExperimentResult):
        return write_experiment(result, outdir)
    if isinstance(result, SweepResult):
        return write_sweep(result, outdir)
    if isinstance(result, RegretScalingReport):
        return write_scaling(result, outdir)
    if isinstance(result, TuneResult):
        return write_tune(result, outdir)
    raise TypeError(f"no exporter for result type {type(result).__name__}")
