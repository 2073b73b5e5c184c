"""Render benchmark figures from exported CSVs.

Five figure kinds:

    scaling      reduction_pct vs horizon per policy, 80% guide line
    sweep_grid   one panel per (scenario, horizon), mean regret vs
                 alpha0, one line per beta0
    curves       cumulative regret and reward over steps, one legend
                 entry per policy (one drawn line per trial)
    boxplot      per-policy boxplots of the trial-level metrics
    moments_demo distributions of sample means and variances by sample
                 size (writes an image pair)

The renderer does no statistics beyond grouping and the quantiles inside
boxplots: every plotted point is a CSV cell. Rendering is deterministic
for identical inputs (Agg backend, fixed layout, no timestamps in PNG).
"""

from __future__ import annotations

import csv
from collections import defaultdict
from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

GUIDE_PCT = 80.0

SCHEMAS = {
    "scaling": ["horizon", "policy", "mean_regret", "mean_suboptimal_pulls", "reduction_pct"],
    "sweep_grid": ["scenario", "horizon", "alpha0", "beta0", "mean_regret", "std_regret"],
    "curves": ["policy", "trial", "step", "cum_regret", "cum_reward"],
    "boxplot": ["policy", "trial", "cum_reward", "cum_regret", "suboptimal_pulls", "seed"],
    "moments_demo": ["sample_size", "trial", "mean", "variance"],
}
KINDS = tuple(SCHEMAS)

_STR_COLUMNS = {"policy", "scenario"}
_INT_COLUMNS = {"horizon", "trial", "step", "suboptimal_pulls", "seed", "sample_size"}


class SchemaError(ValueError):
    """Input CSV does not match the expected schema; names the column."""


class EmptyDataError(ValueError):
    """Input CSV has a header but no data rows."""


@dataclass(frozen=True)
class FigureRequest:
    kind: str
    inputs: tuple[str, ...]
    output: str
    logx: bool = False
    thin: int = 1
    style: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in SCHEMAS:
            raise ValueError(f"unknown figure kind: {self.kind!r} (known: {sorted(SCHEMAS)})")
        if not self.inputs:
            raise ValueError("at least one input CSV is required")
        if self.thin < 1:
            raise ValueError(f"thin must be at least 1, got {self.thin}")


def read_rows(path, kind: str) -> list[dict]:
    """Load and type a CSV after checking it against the kind's schema."""
    expected = SCHEMAS[kind]
    with open(path, newline="", encoding="utf-8") as f:
        reader = csv.reader(f)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError(f"{path}: file is empty, expected columns {expected}") from None
        if header != expected:
            missing = [c for c in expected if c not in header]
            extra = [c for c in header if c not in expected]
            raise SchemaError(
                f"{path}: header mismatch for kind {kind!r}; "
                f"missing column(s) {missing}, unexpected {extra}"
            )
        rows = []
        for raw in reader:
            row = {}
            for name, value in zip(header, raw):
                if name in _STR_COLUMNS:
                    row[name] = value
                elif name in _INT_COLUMNS:
                    row[name] = int(value)
                else:
                    row[name] = float(value)
            rows.append(row)
    if not rows:
        raise EmptyDataError(f"{path}: no data rows")
    return rows


def _policies(rows) -> list[str]:
    return sorted({r["policy"] for r in rows})


def _save(fig, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def _render_scaling(rows, request) -> list[Path]:
    fig, ax = plt.subplots(figsize=(7, 4.5))
    for i, policy in enumerate(_policies(rows)):
        pts = sorted((r["horizon"], r["reduction_pct"]) for r in rows if r["policy"] == policy)
        ax.plot([p[0] for p in pts], [p[1] for p in pts], marker="o", label=policy, color=f"C{i}")
    ax.axhline(GUIDE_PCT, linestyle="--", color="gray", linewidth=1,
               label=f"{GUIDE_PCT:.0f}% guide")
    if request.logx:
        ax.set_xscale("log")
    ax.set_xlabel("horizon T")
    ax.set_ylabel("regret reduction vs baseline (%)")
    ax.set_title("Regret reduction across horizons")
    ax.legend(fontsize=8)
    fig.tight_layout()
    return [_save(fig, request.output)]


def sweep_panels(rows) -> list[tuple[str, int]]:
    """Panel keys (scenario, horizon) in deterministic order."""
    return sorted({(r["scenario"], r["horizon"]) for r in rows})


def _render_sweep_grid(rows, request) -> list[Path]:
    panels = sweep_panels(rows)
    scenarios = sorted({s for s, _ in panels})
    horizons = sorted({h for _, h in panels})
    nrows, ncols = len(scenarios), len(horizons)
    fig, axes = plt.subplots(nrows, ncols, figsize=(4.2 * ncols, 3.2 * nrows),
                             squeeze=False, sharex=True)
    betas = sorted({r["beta0"] for r in rows})
    for i, scenario in enumerate(scenarios):
        for j, horizon in enumerate(horizons):
            ax = axes[i][j]
            cell = [r for r in rows if r["scenario"] == scenario and r["horizon"] == horizon]
            for b_idx, beta0 in enumerate(betas):
                pts = sorted((r["alpha0"], r["mean_regret"]) for r in cell if r["beta0"] == beta0)
                if pts:
                    ax.plot([p[0] for p in pts], [p[1] for p in pts], marker="o",
                            label=f"beta0={beta0:g}", color=f"C{b_idx}")
            ax.set_xscale("log")
            ax.set_title(f"{scenario}, T={horizon}", fontsize=9)
            if i == nrows - 1:
                ax.set_xlabel("alpha0")
            if j == 0:
                ax.set_ylabel("mean cumulative regret")
    axes[0][0].legend(fontsize=7)
    fig.tight_layout()
    return [_save(fig, request.output)]


def _render_curves(rows, request) -> list[Path]:
    fig, (ax_regret, ax_reward) = plt.subplots(1, 2, figsize=(11, 4.2))
    policies = _policies(rows)
    for i, policy in enumerate(policies):
        by_trial = defaultdict(list)
        for r in rows:
            if r["policy"] == policy:
                by_trial[r["trial"]].append(r)
        for t_idx, trial in enumerate(sorted(by_trial)):
            series = sorted(by_trial[trial], key=lambda r: r["step"])[:: request.thin]
            steps = [r["step"] for r in series]
            kwargs = {"color": f"C{i}", "linewidth": 0.9, "alpha": 0.8}
            if t_idx == 0:
                kwargs["label"] = policy
            ax_regret.plot(steps, [r["cum_regret"] for r in series], **kwargs)
            ax_reward.plot(steps, [r["cum_reward"] for r in series], **kwargs)
    for ax, label in ((ax_regret, "cumulative regret"), (ax_reward, "cumulative reward")):
        if request.logx:
            ax.set_xscale("log")
        ax.set_xlabel("step")
        ax.set_ylabel(label)
    ax_regret.legend(fontsize=8)
    fig.tight_layout()
    return [_save(fig, request.output)]


def _render_boxplot(rows, request) -> list[Path]:
    policies = _policies(rows)
    metrics = ["cum_regret", "cum_reward", "suboptimal_pulls"]
    fig, axes = plt.subplots(1, len(metrics), figsize=(4.2 * len(metrics), 4.4))
    for ax, metric in zip(axes, metrics):
        data = [[r[metric] for r in rows if r["policy"] == p] for p in policies]
        ax.boxplot(data, tick_labels=policies)
        ax.set_title(metric)
        ax.tick_params(axis="x", labelrotation=90, labelsize=7)
    fig.tight_layout()
    return [_save(fig, request.output)]


def _render_moments(rows, request) -> list[Path]:
    sizes = sorted({r["sample_size"] for r in rows})
    out = Path(request.output)
    written = []
    for column, title in (("mean", "sample means"), ("variance", "sample variances")):
        fig, ax = plt.subplots(figsize=(6, 4))
        data = [[r[column] for r in rows if r["sample_size"] == s] for s in sizes]
        ax.boxplot(data, tick_labels=[str(s) for s in sizes])
        ax.set_xlabel("sample size")
        ax.set_ylabel(column)
        ax.set_title(f"Distribution of {title} across trials")
        fig.tight_layout()
        suffix = out.suffix or ".png"
        written.append(_save(fig, out.with_name(f"{out.stem}_{column}s{suffix}")))
    return written


_RENDERERS = {
    "scaling": _render_scaling,
    "sweep_grid": _render_sweep_grid,
    "curves": _render_curves,
    "boxplot": _render_boxplot,
    "moments_demo": _render_moments,
}


def render(request: FigureRequest) -> list[Path]:
    """Render one figure request; returns the written image paths."""
    rows = []
    for path in request.inputs:
        rows.extend(read_rows(path, request.kind))
    return _RENDERERS[request.kind](rows, request)
