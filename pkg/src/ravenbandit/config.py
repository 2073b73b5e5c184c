"""Run configuration: parsing, validation, and normalized echo.

Configs come from a JSON file, inline CLI flags, or both (flags win on a
per-key basis). Validation makes every default explicit and rejects
unknown keys, out-of-range values and missing seeds by name, so the
normalized dump written next to the results (``config.echo``) is a
complete, re-runnable record of the experiment.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from pathlib import Path

from .environments import PRESETS, preset
from .policies import PolicySpec, canonical_name, normalize_spec
from .sweep import DEFAULT_GRID_VALUES, DEFAULT_TUNE_RANGES, SweepGrid

COMMANDS = ("run", "compare", "sweep", "tune", "scaling")

_TOP_KEYS = {
    "command", "env", "env_overrides", "policies", "horizon", "trials",
    "seed", "out", "checkpoint_stride", "parallel", "sweep", "tune", "scaling",
}
_SWEEP_KEYS = {"alpha0_values", "beta0_values", "epsilon", "scenarios", "horizons"}
_TUNE_KEYS = {"n_candidates", "ranges"}
_SCALING_KEYS = {"horizons"}


class ConfigError(Exception):
    """A configuration problem; the message names the offending key."""


@dataclass
class RunConfig:
    """Fully validated, fully defaulted description of one invocation."""

    command: str
    seed: int
    env: str | None = None
    env_overrides: dict = field(default_factory=dict)
    policies: list[PolicySpec] = field(default_factory=list)
    horizon: int | None = None
    trials: int = 10
    out: str = "results"
    checkpoint_stride: int | None = None
    parallel: int = 1
    sweep: dict | None = None
    tune: dict | None = None
    scaling: dict | None = None


def _require(cond: bool, message: str):
    if not cond:
        raise ConfigError(message)


def _as_int(value, key: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"{key} must be an integer, got {value!r}")
    return value


def _policy_entry(entry) -> PolicySpec:
    if isinstance(entry, str):
        spec = PolicySpec(entry)
    elif isinstance(entry, dict):
        unknown = set(entry) - {"kind", "params"}
        _require(not unknown, f"unknown policy key(s): {sorted(unknown)}")
        _require("kind" in entry, "policy entry is missing 'kind'")
        spec = PolicySpec(entry["kind"], dict(entry.get("params") or {}))
    else:
        raise ConfigError(f"policy entry must be a string or mapping, got {entry!r}")
    try:
        return normalize_spec(spec)
    except (ValueError, NotImplementedError) as exc:
        raise ConfigError(str(exc)) from exc


def _sweep_section(raw: dict) -> dict:
    unknown = set(raw) - _SWEEP_KEYS
    _require(not unknown, f"unknown sweep key(s): {sorted(unknown)}")
    section = {
        "alpha0_values": [float(v) for v in raw.get("alpha0_values", DEFAULT_GRID_VALUES)],
        "beta0_values": [float(v) for v in raw.get("beta0_values", DEFAULT_GRID_VALUES)],
        "epsilon": float(raw.get("epsilon", 0.001)),
        "scenarios": list(raw.get("scenarios", ("variance-drift", "incremental", "blips"))),
        "horizons": [_as_int(h, "sweep.horizons") for h in raw.get("horizons", (1000, 10000))],
    }
    try:
        SweepGrid(
            alpha0_values=tuple(section["alpha0_values"]),
            beta0_values=tuple(section["beta0_values"]),
            epsilon=section["epsilon"],
            scenarios=tuple(section["scenarios"]),
            horizons=tuple(section["horizons"]),
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    for name in section["scenarios"]:
        _require(name in PRESETS, f"unknown scenario preset in sweep: {name!r}")
    return section


def _tune_section(raw: dict) -> dict:
    unknown = set(raw) - _TUNE_KEYS
    _require(not unknown, f"unknown tune key(s): {sorted(unknown)}")
    n_candidates = _as_int(raw.get("n_candidates", 50), "tune.n_candidates")
    _require(n_candidates >= 1, f"tune.n_candidates must be at least 1, got {n_candidates}")
    ranges = {k: [float(lo), float(hi)] for k, (lo, hi) in DEFAULT_TUNE_RANGES.items()}
    for key, bounds in (raw.get("ranges") or {}).items():
        _require(key in ranges, f"unknown tune range: {key!r}")
        _require(
            isinstance(bounds, (list, tuple)) and len(bounds) == 2,
            f"tune range {key} must be a [lo, hi] pair",
        )
        lo, hi = float(bounds[0]), float(bounds[1])
        _require(0 < lo <= hi, f"tune range {key} must satisfy 0 < lo <= hi, got [{lo}, {hi}]")
        ranges[key] = [lo, hi]
    return {"n_candidates": n_candidates, "ranges": ranges}


def _scaling_section(raw: dict) -> dict:
    unknown = set(raw) - _SCALING_KEYS
    _require(not unknown, f"unknown scaling key(s): {sorted(unknown)}")
    horizons = [_as_int(h, "scaling.horizons") for h in raw.get("horizons", (500, 1000, 2000, 5000, 10000))]
    _require(len(horizons) >= 3, "scaling.horizons needs at least 3 horizons")
    _require(
        all(b > a for a, b in zip(horizons, horizons[1:])),
        f"scaling.horizons must be strictly increasing, got {horizons}",
    )
    return {"horizons": horizons}


def parse_and_validate(source, overrides: dict | None = None) -> RunConfig:
    """Build a RunConfig from a JSON file path or a mapping.

    ``overrides`` (e.g. from CLI flags) replace file keys one by one.
    Every default becomes explicit; unknown keys, bad ranges and a
    missing seed are structured errors naming the key.
    """
    if isinstance(source, (str, Path)):
        path = Path(source)
        if not path.exists():
            raise ConfigError(f"config file not found: {path}")
        try:
            raw = json.loads(path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config file is not valid JSON: {exc}") from exc
    elif isinstance(source, dict):
        raw = dict(source)
    elif source is None:
        raw = {}
    else:
        raise ConfigError(f"unsupported config source: {source!r}")
    for key, value in (overrides or {}).items():
        if value is not None:
            raw[key] = value

    unknown = set(raw) - _TOP_KEYS
    _require(not unknown, f"unknown config key(s): {sorted(unknown)}")

    command = raw.get("command")
    _require(command in COMMANDS, f"command must be one of {COMMANDS}, got {command!r}")
    _require("seed" in raw, "seed is required (runs are never seeded from the clock)")
    seed = _as_int(raw["seed"], "seed")
    _require(seed >= 0, f"seed must be nonnegative, got {seed}")

    env_name = raw.get("env")
    env_overrides = dict(raw.get("env_overrides") or {})
    if env_name is not None:
        _require(env_name in PRESETS, f"unknown environment preset: {env_name!r}")
        try:
            env_spec = preset(env_name, **{k: _json_to_field(v) for k, v in env_overrides.items()})
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"invalid env_overrides: {exc}") from exc
    else:
        env_spec = None

    policies = [_policy_entry(p) for p in raw.get("policies") or []]
    names = [canonical_name(p) for p in policies]
    _require(len(set(names)) == len(names), f"duplicate policies: {names}")

    horizon = raw.get("horizon")
    if horizon is None and env_spec is not None:
        horizon = env_spec.horizon
    if horizon is not None:
        horizon = _as_int(horizon, "horizon")
        _require(horizon >= 1, f"horizon must be at least 1, got {horizon}")

    trials = _as_int(raw.get("trials", 10), "trials")
    _require(trials >= 1, f"trials must be at least 1, got {trials}")
    parallel = _as_int(raw.get("parallel", 1), "parallel")
    _require(parallel >= 1, f"parallel must be at least 1, got {parallel}")
    stride = raw.get("checkpoint_stride")
    if stride is not None:
        stride = _as_int(stride, "checkpoint_stride")
        _require(stride >= 1, f"checkpoint_stride must be at least 1, got {stride}")

    cfg = RunConfig(
        command=command,
        seed=seed,
        env=env_name,
        env_overrides=env_overrides,
        policies=policies,
        horizon=horizon,
        trials=trials,
        out=str(raw.get("out", "results")),
        checkpoint_stride=stride,
        parallel=parallel,
        sweep=_sweep_section(raw.get("sweep") or {}) if command == "sweep" else None,
        tune=_tune_section(raw.get("tune") or {}) if command == "tune" else None,
        scaling=_scaling_section(raw.get("scaling") or {}) if command == "scaling" else None,
    )

    if command in ("run", "compare", "tune", "scaling"):
        _require(cfg.env is not None, f"command {command!r} needs an environment preset (env)")
        _require(cfg.horizon is not None, f"command {command!r} needs a horizon")
    if command == "run":
        _require(len(cfg.policies) == 1, "command 'run' needs exactly one policy")
    if command == "compare":
        _require(len(cfg.policies) >= 1, "command 'compare' needs at least one policy")
    if command == "scaling":
        _require(
            len(cfg.policies) == 2,
            "command 'scaling' needs exactly two policies: candidate then baseline",
        )
    return cfg


def _json_to_field(value):
    """Config JSON uses lists where spec fields are tuples."""
    if isinstance(value, list):
        return tuple(_json_to_field(v) for v in value)
    return value


def config_to_dict(cfg: RunConfig) -> dict:
    """Plain-data form of a config, every default explicit."""
    out = asdict(cfg)
    out["policies"] = [{"kind": p.kind, "params": dict(p.params)} for p in cfg.policies]
    return out


def echo_config(cfg: RunConfig) -> str:
    """Normalized JSON dump; parsing it back reproduces ``cfg`` exactly."""
    return json.dumps(config_to_dict(cfg), indent=2, sort_keys=True) + "\n"
