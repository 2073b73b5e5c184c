"""Hyperparameter search for the variance-adaptive policy.

Two strategies: an exhaustive grid over (alpha0, beta0) at fixed epsilon,
and a seeded log-uniform random search over (alpha0, beta0, epsilon).
Both evaluate candidates through the harness, and because policy RNG
streams are keyed by the candidate's own parameters (not its position in
the grid), removing a cell or candidate never changes any other's value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .environments import EnvironmentSpec, preset
from .harness import run_experiment
from .policies import PolicySpec, canonical_name
from .rng import derive_rng

DEFAULT_GRID_VALUES = (0.5, 1.0, 5.0, 10.0)
DEFAULT_TUNE_RANGES = {
    "alpha0": (0.01, 10.0),
    "beta0": (0.01, 10.0),
    "epsilon": (0.001, 0.5),
}


@dataclass(frozen=True)
class SweepGrid:
    """Cartesian (scenario, horizon, alpha0, beta0) evaluation grid."""

    alpha0_values: tuple[float, ...] = DEFAULT_GRID_VALUES
    beta0_values: tuple[float, ...] = DEFAULT_GRID_VALUES
    epsilon: float = 0.001
    scenarios: tuple[str, ...] = ("variance-drift", "incremental", "blips")
    horizons: tuple[int, ...] = (1000, 10000)

    def __post_init__(self):
        if not self.alpha0_values or any(a <= 0 for a in self.alpha0_values):
            raise ValueError("alpha0_values must be nonempty and positive")
        if not self.beta0_values or any(b < 0 for b in self.beta0_values):
            raise ValueError("beta0_values must be nonempty and nonnegative")
        if not 0 < self.epsilon <= 0.5:
            raise ValueError(f"epsilon must be in (0, 0.5], got {self.epsilon}")
        if not self.scenarios:
            raise ValueError("scenarios must be nonempty")
        if not self.horizons or any(h < 1 for h in self.horizons):
            raise ValueError("horizons must be nonempty and positive")

    def cell_count(self) -> int:
        return (
            len(self.scenarios)
            * len(self.horizons)
            * len(self.alpha0_values)
            * len(self.beta0_values)
        )


@dataclass(frozen=True)
class SweepCell:
    scenario: str
    horizon: int
    alpha0: float
    beta0: float
    mean_regret: float
    std_regret: float


@dataclass
class SweepResult:
    """Emitted table of the sweep, in grid order."""

    rows: list[SweepCell]
    n_trials: int
    epsilon: float

    def argmin(self, scenario: str, horizon: int) -> SweepCell:
        """Best cell for one (scenario, horizon); first in grid order on ties."""
        cells = [r for r in self.rows if r.scenario == scenario and r.horizon == horizon]
        if not cells:
            raise ValueError(f"no cells for scenario {scenario!r} at horizon {horizon}")
        return min(cells, key=lambda c: c.mean_regret)


def _raven_spec(alpha0: float, beta0: float, epsilon: float) -> PolicySpec:
    return PolicySpec("raven_ucb", {"alpha0": alpha0, "beta0": beta0, "epsilon": epsilon})


def grid_sweep(
    grid: SweepGrid,
    n_trials: int,
    master_seed: int,
    parallel: int = 1,
    env_overrides: dict | None = None,
) -> SweepResult:
    """Evaluate every grid cell; one experiment per (scenario, horizon)
    so that all (alpha0, beta0) variants share environment trajectories."""
    combos = [(a, b) for a in grid.alpha0_values for b in grid.beta0_values]
    rows: list[SweepCell] = []
    for scenario in grid.scenarios:
        env = preset(scenario, **(env_overrides or {}))
        for horizon in grid.horizons:
            policies = [_raven_spec(a, b, grid.epsilon) for a, b in combos]
            res = run_experiment(policies, env, horizon, n_trials, master_seed, parallel=parallel)
            summary = res.summary()
            for spec, (a, b) in zip(policies, combos):
                mean, std = summary[canonical_name(spec)]["cum_regret"]
                rows.append(SweepCell(scenario, horizon, a, b, mean, std))
    return SweepResult(rows=rows, n_trials=n_trials, epsilon=grid.epsilon)


@dataclass(frozen=True)
class TuneCandidate:
    index: int
    alpha0: float
    beta0: float
    epsilon: float
    mean_regret: float
    std_regret: float


@dataclass
class TuneResult:
    """Random-search outcome: the winning parameters plus the full table."""

    best: TuneCandidate
    candidates: list[TuneCandidate]
    n_trials: int

    @property
    def best_params(self) -> dict[str, float]:
        return {"alpha0": self.best.alpha0, "beta0": self.best.beta0, "epsilon": self.best.epsilon}


def _log_uniform(rng, lo: float, hi: float) -> float:
    return math.exp(rng.uniform(math.log(lo), math.log(hi)))


def random_search(
    ranges: dict[str, tuple[float, float]] | None,
    n_candidates: int,
    objective_env: EnvironmentSpec,
    horizon: int,
    n_trials: int,
    master_seed: int,
    parallel: int = 1,
) -> TuneResult:
    """Seeded log-uniform search over (alpha0, beta0, epsilon).

    Candidates are drawn up front from a dedicated stream, then all
    evaluated in one experiment (shared trajectories). The minimizer of
    mean cumulative regret wins; ties break toward the earlier draw.
    """
    if n_candidates < 1:
        raise ValueError(f"n_candidates must be at least 1, got {n_candidates}")
    bounds = dict(DEFAULT_TUNE_RANGES)
    if ranges:
        unknown = set(ranges) - set(bounds)
        if unknown:
            raise ValueError(f"unknown tuning range(s): {sorted(unknown)}")
        bounds.update({k: tuple(v) for k, v in ranges.items()})
    for key, (lo, hi) in bounds.items():
        if not 0 < lo <= hi:
            raise ValueError(f"range for {key} must satisfy 0 < lo <= hi, got ({lo}, {hi})")

    rng = derive_rng(master_seed, "tune_candidates")
    params = []
    seen = set()
    for _ in range(n_candidates):
        cand = (
            _log_uniform(rng, *bounds["alpha0"]),
            _log_uniform(rng, *bounds["beta0"]),
            _log_uniform(rng, *bounds["epsilon"]),
        )
        if cand not in seen:  # duplicate draws would collide as policy names
            seen.add(cand)
            params.append(cand)

    specs = [_raven_spec(a, b, e) for a, b, e in params]
    res = run_experiment(specs, objective_env, horizon, n_trials, master_seed, parallel=parallel)
    summary = res.summary()
    candidates = []
    for i, (spec, (a, b, e)) in enumerate(zip(specs, params)):
        mean, std = summary[canonical_name(spec)]["cum_regret"]
        candidates.append(TuneCandidate(i, a, b, e, mean, std))
    best = min(candidates, key=lambda c: (c.mean_regret, c.index))
    return TuneResult(best=best, candidates=candidates, n_trials=n_trials)
