"""Command-line entry point.

Commands:

    run      one policy on one environment
    compare  several policies on one environment (regret/reward tables)
    sweep    (alpha0, beta0) grid over scenario presets
    tune     seeded random search for (alpha0, beta0, epsilon)
    scaling  regret reduction and pull growth across horizons
    moments  sample-moment distributions CSV for the plotting component

Every experiment command requires an explicit --seed, writes its CSVs
plus a normalized config.echo into --out, and is bit-reproducible at any
--parallel level.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .config import ConfigError, RunConfig, echo_config, parse_and_validate
from .environments import PRESETS, preset
from .export import export_results, fmt, write_moments
from .harness import run_experiment, scaling_check
from .policies import PolicySpec
from .rng import derive_rng
from .streaming import StreamingStats
from .sweep import SweepGrid, grid_sweep, random_search


def parse_policy_flag(text: str) -> dict:
    """``kind[:key=value,...]`` -> policy entry mapping."""
    kind, _, rest = text.partition(":")
    params = {}
    if rest:
        for item in rest.split(","):
            key, eq, value = item.partition("=")
            if not eq:
                raise ConfigError(f"policy parameter {item!r} is not key=value")
            try:
                params[key] = float(value)
            except ValueError as exc:
                raise ConfigError(f"policy parameter {key} has non-numeric value {value!r}") from exc
    return {"kind": kind, "params": params}


def _int_list(text: str, key: str) -> list[int]:
    try:
        return [int(part) for part in text.split(",") if part]
    except ValueError as exc:
        raise ConfigError(f"{key} must be a comma-separated list of integers, got {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ravenbandit",
        description="Variance-adaptive bandit benchmark harness",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, with_policies=True):
        p.add_argument("--config", help="JSON config file; flags override its keys")
        p.add_argument("--env", choices=sorted(PRESETS), help="environment preset")
        if with_policies:
            p.add_argument(
                "--policy", action="append", dest="policies", metavar="KIND[:K=V,...]",
                help="policy spec, repeatable (e.g. raven_ucb:alpha0=1,beta0=5)",
            )
        p.add_argument("--horizon", type=int, help="steps per trial")
        p.add_argument("--trials", type=int, help="independent trials")
        p.add_argument("--seed", type=int, help="master seed (required)")
        p.add_argument("--out", help="output directory (default: results)")
        p.add_argument("--parallel", type=int, help="worker processes (default: 1)")
        p.add_argument("--checkpoint-stride", type=int, help="steps between curve checkpoints")

    add_common(sub.add_parser("run", help="one policy, one environment"))
    add_common(sub.add_parser("compare", help="many policies, one environment"))

    p_sweep = sub.add_parser("sweep", help="grid over alpha0/beta0")
    add_common(p_sweep, with_policies=False)
    p_sweep.add_argument("--scenarios", help="comma-separated scenario presets")
    p_sweep.add_argument("--horizons", help="comma-separated horizons")

    p_tune = sub.add_parser("tune", help="random search for raven parameters")
    add_common(p_tune, with_policies=False)
    p_tune.add_argument("--candidates", type=int, help="number of candidates (default: 50)")

    p_scaling = sub.add_parser("scaling", help="regret reduction across horizons")
    add_common(p_scaling)
    p_scaling.add_argument("--horizons", help="comma-separated horizons")

    p_moments = sub.add_parser("moments", help="sample-moment distribution CSV")
    p_moments.add_argument("--sizes", required=True, help="comma-separated sample sizes")
    p_moments.add_argument("--trials", type=int, default=100)
    p_moments.add_argument("--seed", type=int, required=True)
    p_moments.add_argument("--out", default="results")
    return parser


def _config_from_args(args) -> RunConfig:
    overrides: dict = {
        "command": args.command,
        "env": getattr(args, "env", None),
        "horizon": getattr(args, "horizon", None),
        "trials": getattr(args, "trials", None),
        "seed": getattr(args, "seed", None),
        "out": getattr(args, "out", None),
        "parallel": getattr(args, "parallel", None),
        "checkpoint_stride": getattr(args, "checkpoint_stride", None),
    }
    if getattr(args, "policies", None):
        overrides["policies"] = [parse_policy_flag(p) for p in args.policies]
    if args.command == "sweep":
        section = {}
        if args.scenarios:
            section["scenarios"] = [s for s in args.scenarios.split(",") if s]
        if args.horizons:
            section["horizons"] = _int_list(args.horizons, "horizons")
        if section:
            overrides["sweep"] = section
    if args.command == "tune" and getattr(args, "candidates", None):
        overrides["tune"] = {"n_candidates": args.candidates}
    if args.command == "scaling" and getattr(args, "horizons", None):
        overrides["scaling"] = {"horizons": _int_list(args.horizons, "horizons")}
    return parse_and_validate(getattr(args, "config", None), overrides)


def _print_summary(result) -> None:
    for name in sorted(result.policy_names):
        mean_regret, std_regret = result.summary()[name]["cum_regret"]
        print(f"{name}: mean cumulative regret {mean_regret:.4f} (std {std_regret:.4f})")


def _execute(cfg: RunConfig) -> None:
    outdir = Path(cfg.out)
    outdir.mkdir(parents=True, exist_ok=True)
    if cfg.command in ("run", "compare"):
        env = preset(cfg.env, **cfg.env_overrides)
        result = run_experiment(
            cfg.policies, env, cfg.horizon, cfg.trials, cfg.seed,
            parallel=cfg.parallel, checkpoint_stride=cfg.checkpoint_stride,
        )
        export_results(result, outdir)
        _print_summary(result)
    elif cfg.command == "sweep":
        grid = SweepGrid(
            alpha0_values=tuple(cfg.sweep["alpha0_values"]),
            beta0_values=tuple(cfg.sweep["beta0_values"]),
            epsilon=cfg.sweep["epsilon"],
            scenarios=tuple(cfg.sweep["scenarios"]),
            horizons=tuple(cfg.sweep["horizons"]),
        )
        result = grid_sweep(grid, cfg.trials, cfg.seed, parallel=cfg.parallel,
                            env_overrides=cfg.env_overrides or None)
        export_results(result, outdir)
        print(f"sweep: {grid.cell_count()} cells written")
    elif cfg.command == "tune":
        env = preset(cfg.env, **cfg.env_overrides)
        ranges = {k: tuple(v) for k, v in cfg.tune["ranges"].items()}
        result = random_search(
            ranges, cfg.tune["n_candidates"], env, cfg.horizon, cfg.trials, cfg.seed,
            parallel=cfg.parallel,
        )
        export_results(result, outdir)
        best = result.best
        print(
            f"best: alpha0={fmt(best.alpha0)} beta0={fmt(best.beta0)} "
            f"epsilon={fmt(best.epsilon)} mean_regret={fmt(best.mean_regret)}"
        )
    elif cfg.command == "scaling":
        env = preset(cfg.env, **cfg.env_overrides)
        candidate, baseline = cfg.policies
        report = scaling_check(
            candidate, baseline, env, cfg.scaling["horizons"], cfg.trials, cfg.seed,
            parallel=cfg.parallel,
        )
        export_results(report, outdir)
        for horizon, pct in zip(report.horizons, report.reduction_pct):
            print(f"T={horizon}: reduction {pct:.2f}%")
    else:
        raise ConfigError(f"unhandled command: {cfg.command!r}")
    (outdir / "config.echo").write_text(echo_config(cfg), encoding="utf-8")


def _run_moments(args) -> None:
    """Distributions of streaming sample moments on unit Gaussian draws."""
    sizes = _int_list(args.sizes, "sizes")
    if not sizes or any(s < 1 for s in sizes):
        raise ConfigError(f"sizes must be positive, got {args.sizes!r}")
    if args.trials < 1:
        raise ConfigError(f"trials must be at least 1, got {args.trials}")
    rows = []
    for size in sizes:
        for trial in range(args.trials):
            rng = derive_rng(args.seed, "moments", size, trial)
            stats = StreamingStats()
            for x in rng.normal(0.0, 1.0, size=size):
                stats.update(float(x))
            rows.append((size, trial, stats.mean, stats.variance()))
    write_moments(rows, args.out)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "moments":
            _run_moments(args)
        else:
            cfg = _config_from_args(args)
            _execute(cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001 - runtime failures map to exit code 3
        print(f"error: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
