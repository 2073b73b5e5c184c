"""Reward generators for stationary and drifting bandit environments.

Each scenario describes how the per-arm distributions (mean, variance)
evolve over the horizon:

============== =====================================================
stationary      distributions never change
incremental     mu_k(t) = mu_k(0) + slope_k * t
variance_drift  sigma2_k(t) = sigma2_k(0) + growth * t
gradual_drift   each step is drawn from the old regime with
                probability 1 - ramp(t) and the new one otherwise,
                ramp linear on [ramp_start, ramp_end]
localized_jump  every ``reset_interval`` steps a random third of the
                arms is redrawn from the configured ranges
periodic        piecewise-constant phase schedule repeating with a
                fixed period
blips           one arm's mean is offset inside a short window and
                reverts afterwards
add_remove_arm  one extra arm activates at ``add_time`` and one
                original arm deactivates at ``remove_time``
logistics       localized_jump with Gaussian rewards (warehouse
                efficiency scores)
============== =====================================================

The trajectory of true parameters is a function of the environment
streams only, never of the policy's choices, so every policy compared
within a trial faces the identical evolution.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass

import numpy as np

from .rng import RewardNoise

SCENARIOS = (
    "stationary",
    "incremental_drift",
    "variance_drift",
    "gradual_drift",
    "localized_jump",
    "periodic",
    "blips",
    "add_remove_arm",
    "logistics",
)
FAMILIES = ("bernoulli", "gaussian")


@dataclass(frozen=True)
class ArmDistribution:
    """Snapshot of one arm's current reward distribution."""

    family: str
    mu: float
    sigma2: float = 0.0

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family: {self.family!r}")
        if self.family == "bernoulli" and not 0.0 <= self.mu <= 1.0:
            raise ValueError(f"bernoulli mean must lie in [0, 1], got {self.mu}")
        if self.sigma2 < 0.0:
            raise ValueError(f"variance must be nonnegative, got {self.sigma2}")

    def variance(self) -> float:
        if self.family == "bernoulli":
            return self.mu * (1.0 - self.mu)
        return self.sigma2


@dataclass(frozen=True)
class EnvironmentSpec:
    """Declarative scenario description; immutable and shareable.

    Initial per-arm parameters are either fixed (``init_means`` /
    ``init_vars``) or drawn per trial from ``mean_range`` / ``var_range``
    using the trial's init stream. Scenario-specific fields are left
    ``None`` by scenarios that do not use them.
    """

    scenario: str
    family: str
    k: int
    horizon: int
    mean_range: tuple[float, float] | None = None
    var_range: tuple[float, float] | None = None
    init_means: tuple[float, ...] | None = None
    init_vars: tuple[float, ...] | None = None
    # incremental_drift
    drift_slopes: tuple[float, ...] | None = None
    # variance_drift: sigma2_k(t) = sigma2_k(0) + variance_growth * t
    variance_growth: float | None = None
    # gradual_drift ramp window [ramp_start, ramp_end]
    ramp_start: int | None = None
    ramp_end: int | None = None
    new_means: tuple[float, ...] | None = None
    new_vars: tuple[float, ...] | None = None
    # localized_jump / logistics
    reset_interval: int | None = None
    reset_fraction: float = 1.0 / 3.0
    # periodic: phases of (length, per-arm means, optional per-arm variances)
    phases: tuple[tuple, ...] | None = None
    # blips
    blip_start: int | None = None
    blip_len: int | None = None
    blip_arm: int | None = None
    blip_delta: float | None = None
    # add_remove_arm: slot k (one past the initial arms) activates at
    # add_time, arm removed_arm deactivates at remove_time
    add_time: int | None = None
    remove_time: int | None = None
    removed_arm: int | None = None

    def __post_init__(self):
        if self.scenario not in SCENARIOS:
            raise ValueError(f"unknown scenario: {self.scenario!r}")
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family: {self.family!r}")
        if self.k < 1:
            raise ValueError(f"k must be at least 1, got {self.k}")
        if self.horizon < 1:
            raise ValueError(f"horizon must be at least 1, got {self.horizon}")
        for name in ("mean_range", "var_range"):
            rng = getattr(self, name)
            if rng is not None:
                lo, hi = rng
                if not lo <= hi:
                    raise ValueError(f"{name} must be ordered, got ({lo}, {hi})")
                if name == "var_range" and lo < 0:
                    raise ValueError(f"var_range must be nonnegative, got ({lo}, {hi})")
        for name in ("init_means", "init_vars", "drift_slopes", "new_means", "new_vars"):
            vals = getattr(self, name)
            if vals is not None and len(vals) != self.k:
                raise ValueError(f"{name} must have one entry per arm ({self.k}), got {len(vals)}")
        if self.init_means is None and self.mean_range is None:
            raise ValueError("either init_means or mean_range is required")
        if self.family == "gaussian" and self.init_vars is None and self.var_range is None:
            raise ValueError("gaussian environments need init_vars or var_range")
        for name in ("ramp_start", "ramp_end", "reset_interval", "blip_start", "add_time", "remove_time"):
            val = getattr(self, name)
            if val is not None and not 1 <= val <= self.horizon:
                raise ValueError(f"{name} must lie in [1, horizon], got {val}")
        if self.scenario == "incremental_drift" and self.drift_slopes is None:
            raise ValueError("incremental_drift needs drift_slopes")
        if self.scenario == "variance_drift":
            if self.variance_growth is None or self.variance_growth < 0:
                raise ValueError("variance_drift needs a nonnegative variance_growth")
        if self.scenario == "gradual_drift":
            if self.ramp_start is None or self.ramp_end is None:
                raise ValueError("gradual_drift needs ramp_start and ramp_end")
            if not self.ramp_start < self.ramp_end:
                raise ValueError("ramp_start must precede ramp_end")
        if self.scenario in ("localized_jump", "logistics"):
            if self.reset_interval is None:
                raise ValueError(f"{self.scenario} needs reset_interval")
            if self.mean_range is None or (self.family == "gaussian" and self.var_range is None):
                raise ValueError(f"{self.scenario} needs mean_range (and var_range for gaussian)")
            if not 0.0 < self.reset_fraction <= 1.0:
                raise ValueError(f"reset_fraction must be in (0, 1], got {self.reset_fraction}")
        if self.scenario == "periodic":
            if not self.phases:
                raise ValueError("periodic needs a nonempty phase schedule")
            for phase in self.phases:
                if len(phase[1]) != self.k:
                    raise ValueError("each phase needs one mean per arm")
        if self.scenario == "blips":
            if None in (self.blip_start, self.blip_len, self.blip_arm, self.blip_delta):
                raise ValueError("blips needs blip_start, blip_len, blip_arm and blip_delta")
            if not 0 <= self.blip_arm < self.k:
                raise ValueError(f"blip_arm must be an arm index, got {self.blip_arm}")
        if self.scenario == "add_remove_arm":
            if None in (self.add_time, self.remove_time, self.removed_arm):
                raise ValueError("add_remove_arm needs add_time, remove_time and removed_arm")
            if not self.add_time <= self.remove_time:
                raise ValueError("add_time must not exceed remove_time")
            if not 0 <= self.removed_arm < self.k:
                raise ValueError(f"removed_arm must be an original arm index, got {self.removed_arm}")
            if self.mean_range is None or (self.family == "gaussian" and self.var_range is None):
                raise ValueError("add_remove_arm needs mean_range (and var_range for gaussian) "
                                 "to draw the added arm's distribution")

    @property
    def total_slots(self) -> int:
        """Number of arm slots ever used (one extra for add_remove_arm)."""
        return self.k + 1 if self.scenario == "add_remove_arm" else self.k

    @property
    def period(self) -> int | None:
        if self.phases is None:
            return None
        return sum(int(p[0]) for p in self.phases)

    def reward_bound(self) -> float:
        """Working upper bound on rewards (for range-based policies).

        Exact (1.0) for Bernoulli; mu_max + 3*sigma_max for Gaussian,
        whose rewards are unbounded.
        """
        if self.family == "bernoulli":
            return 1.0
        mu_max = max(self.init_means) if self.init_means else self.mean_range[1]
        if self.phases:
            mu_max = max(mu_max, max(max(p[1]) for p in self.phases))
        if self.drift_slopes:
            mu_max += max(0.0, max(self.drift_slopes)) * self.horizon
        if self.blip_delta:
            mu_max += abs(self.blip_delta)
        if self.init_vars:
            var_max = max(self.init_vars)
        else:
            var_max = self.var_range[1] if self.var_range else 0.0
        if self.variance_growth:
            var_max += self.variance_growth * self.horizon
        return mu_max + 3.0 * math.sqrt(var_max)


@dataclass
class EnvironmentState:
    """Evolving true parameters of one trial's environment."""

    spec: EnvironmentSpec
    mu: np.ndarray
    sigma2: np.ndarray
    active: np.ndarray
    t: int
    base_mu: np.ndarray
    base_sigma2: np.ndarray
    alt_mu: np.ndarray | None = None
    alt_sigma2: np.ndarray | None = None
    last_reset: tuple[int, ...] | None = None

    @property
    def family(self) -> str:
        return self.spec.family

    @property
    def n_slots(self) -> int:
        return len(self.mu)

    def active_arms(self) -> list[int]:
        return [int(k) for k in np.flatnonzero(self.active)]

    def distribution(self, arm: int) -> ArmDistribution:
        sigma2 = self.mu[arm] * (1 - self.mu[arm]) if self.family == "bernoulli" else self.sigma2[arm]
        return ArmDistribution(self.family, float(self.mu[arm]), float(sigma2))


def _draw(rng: np.random.Generator, bounds: tuple[float, float], size: int) -> np.ndarray:
    lo, hi = bounds
    return rng.uniform(lo, hi, size=size)


def init_state(spec: EnvironmentSpec, rng: np.random.Generator) -> EnvironmentState:
    """Materialise the trial's starting distributions from the init stream.

    The draw order is fixed (means, then variances, then any alternative
    regime parameters) so that trajectories are reproducible functions of
    the stream alone.
    """
    slots = spec.total_slots
    if spec.init_means is not None:
        mu = np.array(spec.init_means, dtype=float)
    else:
        mu = _draw(rng, spec.mean_range, spec.k)
    if spec.family == "gaussian":
        if spec.init_vars is not None:
            sigma2 = np.array(spec.init_vars, dtype=float)
        else:
            sigma2 = _draw(rng, spec.var_range, spec.k)
    else:
        sigma2 = np.zeros(spec.k)

    if spec.scenario == "add_remove_arm":
        # the extra slot's distribution is fixed at init so the full
        # trajectory is determined before any step runs
        mu = np.concatenate([mu, _draw(rng, spec.mean_range, 1)])
        if spec.family == "gaussian":
            sigma2 = np.concatenate([sigma2, _draw(rng, spec.var_range, 1)])
        else:
            sigma2 = np.concatenate([sigma2, [0.0]])

    alt_mu = alt_sigma2 = None
    if spec.scenario == "gradual_drift":
        if spec.new_means is not None:
            alt_mu = np.array(spec.new_means, dtype=float)
        else:
            alt_mu = _draw(rng, spec.mean_range, spec.k)
        if spec.family == "gaussian":
            if spec.new_vars is not None:
                alt_sigma2 = np.array(spec.new_vars, dtype=float)
            else:
                alt_sigma2 = _draw(rng, spec.var_range, spec.k)
        else:
            alt_sigma2 = np.zeros(spec.k)

    active = np.ones(slots, dtype=bool)
    if spec.scenario == "add_remove_arm":
        active[spec.k] = False

    return EnvironmentState(
        spec=spec,
        mu=mu.copy(),
        sigma2=sigma2.copy(),
        active=active,
        t=0,
        base_mu=mu.copy(),
        base_sigma2=sigma2.copy(),
        alt_mu=alt_mu,
        alt_sigma2=alt_sigma2,
    )


def advance(state: EnvironmentState, t: int, rng: np.random.Generator) -> EnvironmentState:
    """Evolve the true distributions to step ``t`` (called once per step).

    Closed-form scenarios recompute their parameters exactly from the
    initial values; stochastic ones (gradual ramp coins, jump resets)
    consume the drift stream in a schedule that does not depend on any
    policy's choices.
    """
    spec = state.spec
    if not 1 <= t <= spec.horizon:
        raise ValueError(f"step {t} outside [1, {spec.horizon}]")
    if t != state.t + 1:
        raise ValueError(f"advance must be called sequentially (state at {state.t}, got {t})")
    state.t = t
    state.last_reset = None
    scenario = spec.scenario

    if scenario == "stationary":
        return state

    if scenario == "incremental_drift":
        mu = state.base_mu + np.asarray(spec.drift_slopes) * t
        if spec.family == "bernoulli":
            mu = np.clip(mu, 0.0, 1.0)
        state.mu = mu
        return state

    if scenario == "variance_drift":
        state.sigma2 = state.base_sigma2 + spec.variance_growth * t
        return state

    if scenario == "gradual_drift":
        t0, t1 = spec.ramp_start, spec.ramp_end
        if t < t0:
            state.mu = state.base_mu.copy()
            state.sigma2 = state.base_sigma2.copy()
        elif t >= t1:
            state.mu = state.alt_mu.copy()
            state.sigma2 = state.alt_sigma2.copy()
        else:
            ramp = (t - t0) / (t1 - t0)
            use_new = rng.random(spec.k) < ramp
            state.mu = np.where(use_new, state.alt_mu, state.base_mu)
            state.sigma2 = np.where(use_new, state.alt_sigma2, state.base_sigma2)
        return state

    if scenario in ("localized_jump", "logistics"):
        if t % spec.reset_interval == 0:
            n_reset = int(spec.k * spec.reset_fraction)
            if n_reset > 0:
                chosen = rng.choice(spec.k, size=n_reset, replace=False)
                state.mu[chosen] = _draw(rng, spec.mean_range, n_reset)
                if spec.family == "gaussian":
                    state.sigma2[chosen] = _draw(rng, spec.var_range, n_reset)
                state.last_reset = tuple(sorted(int(c) for c in chosen))
        return state

    if scenario == "periodic":
        pos = (t - 1) % spec.period
        for length, means, *rest in spec.phases:
            if pos < length:
                state.mu = np.asarray(means, dtype=float).copy()
                if rest and rest[0] is not None:
                    state.sigma2 = np.asarray(rest[0], dtype=float).copy()
                return state
            pos -= length
        raise AssertionError("phase schedule shorter than its period")

    if scenario == "blips":
        in_blip = spec.blip_start <= t < spec.blip_start + spec.blip_len
        mu = state.base_mu.copy()
        if in_blip:
            mu[spec.blip_arm] += spec.blip_delta
            if spec.family == "bernoulli":
                mu = np.clip(mu, 0.0, 1.0)
        state.mu = mu
        return state

    if scenario == "add_remove_arm":
        state.active[spec.k] = t >= spec.add_time
        state.active[spec.removed_arm] = t < spec.remove_time
        return state

    raise AssertionError(f"unhandled scenario {scenario!r}")


def sample_reward(state: EnvironmentState, arm: int, noise: RewardNoise) -> float:
    """Draw one reward for ``arm`` at the state's current step."""
    if not 0 <= arm < state.n_slots or not state.active[arm]:
        raise ValueError(f"arm {arm} is not active at step {state.t}")
    mu = float(state.mu[arm])
    if state.family == "bernoulli":
        return 1.0 if noise.uniform(state.t, arm) < mu else 0.0
    sigma = math.sqrt(float(state.sigma2[arm]))
    return mu + sigma * noise.normal(state.t, arm)


def oracle_best(state: EnvironmentState) -> tuple[int, float]:
    """Best active arm by true mean, lowest index on ties.

    Uses the hidden parameters; evaluation-only, policies never see it.
    """
    best = -1
    best_mu = -math.inf
    for k in range(state.n_slots):
        if state.active[k] and state.mu[k] > best_mu:
            best, best_mu = k, float(state.mu[k])
    if best < 0:
        raise ValueError("no active arms")
    return best, best_mu


def make_bernoulli_experiment(
    k: int = 10,
    mean_range: tuple[float, float] = (0.8, 0.95),
    seed: int = 0,
    horizon: int = 5000,
) -> EnvironmentSpec:
    """Stationary Bernoulli instance with means fixed by ``seed``."""
    rng = np.random.default_rng(seed)
    means = tuple(float(x) for x in rng.uniform(mean_range[0], mean_range[1], size=k))
    return EnvironmentSpec(
        scenario="stationary",
        family="bernoulli",
        k=k,
        horizon=horizon,
        mean_range=tuple(mean_range),
        init_means=means,
    )


def make_logistics_env(
    k: int = 100,
    mean_range: tuple[float, float] = (0.3, 0.8),
    var_range: tuple[float, float] = (0.01, 0.09),
    reset_interval: int = 5000,
    horizon: int = 50000,
) -> EnvironmentSpec:
    """Warehouse-efficiency simulation: Gaussian rewards, periodic resets
    of a random third of the arms."""
    return EnvironmentSpec(
        scenario="logistics",
        family="gaussian",
        k=k,
        horizon=horizon,
        mean_range=tuple(mean_range),
        var_range=tuple(var_range),
        reset_interval=reset_interval,
    )


def _preset_bernoulli_regret() -> EnvironmentSpec:
    # 10-arm stationary Bernoulli, means redrawn per trial from [0.8, 0.95]
    return EnvironmentSpec(
        scenario="stationary",
        family="bernoulli",
        k=10,
        horizon=5000,
        mean_range=(0.8, 0.95),
    )


def _preset_incremental() -> EnvironmentSpec:
    # slow opposing mean drifts; the best arm changes identity mid-run
    return EnvironmentSpec(
        scenario="incremental_drift",
        family="gaussian",
        k=5,
        horizon=10000,
        mean_range=(0.3, 0.7),
        var_range=(0.02, 0.05),
        drift_slopes=(5e-5, -5e-5, 2.5e-5, 0.0, -2.5e-5),
    )


def _preset_variance_drift() -> EnvironmentSpec:
    return EnvironmentSpec(
        scenario="variance_drift",
        family="gaussian",
        k=5,
        horizon=10000,
        mean_range=(0.3, 0.7),
        var_range=(0.01, 0.05),
        variance_growth=1e-5,
    )


def _preset_gradual() -> EnvironmentSpec:
    return EnvironmentSpec(
        scenario="gradual_drift",
        family="gaussian",
        k=5,
        horizon=10000,
        mean_range=(0.3, 0.7),
        var_range=(0.02, 0.05),
        ramp_start=3000,
        ramp_end=7000,
    )


def _preset_periodic() -> EnvironmentSpec:
    return EnvironmentSpec(
        scenario="periodic",
        family="gaussian",
        k=3,
        horizon=10000,
        init_means=(0.7, 0.4, 0.2),
        init_vars=(0.02, 0.02, 0.02),
        phases=(
            (500, (0.7, 0.4, 0.2), (0.02, 0.02, 0.02)),
            (500, (0.2, 0.5, 0.7), (0.02, 0.02, 0.02)),
        ),
    )


def _preset_blips() -> EnvironmentSpec:
    # +0.3 offset on one arm for 5% of the horizon
    return EnvironmentSpec(
        scenario="blips",
        family="gaussian",
        k=5,
        horizon=10000,
        mean_range=(0.3, 0.6),
        var_range=(0.02, 0.05),
        blip_start=4500,
        blip_len=500,
        blip_arm=0,
        blip_delta=0.3,
    )


def _preset_add_remove() -> EnvironmentSpec:
    return EnvironmentSpec(
        scenario="add_remove_arm",
        family="gaussian",
        k=5,
        horizon=10000,
        mean_range=(0.3, 0.7),
        var_range=(0.02, 0.05),
        add_time=3000,
        remove_time=7000,
        removed_arm=0,
    )


PRESETS = {
    "bernoulli-s4.1": _preset_bernoulli_regret,
    "logistics-table2": make_logistics_env,
    "logistics-desk": lambda: make_logistics_env(k=20, reset_interval=2000, horizon=10000),
    "incremental": _preset_incremental,
    "variance-drift": _preset_variance_drift,
    "gradual": _preset_gradual,
    "periodic": _preset_periodic,
    "blips": _preset_blips,
    "add-remove": _preset_add_remove,
}


def preset(name: str, **overrides) -> EnvironmentSpec:
    """Look up a named scenario preset, optionally overriding fields."""
    if name not in PRESETS:
        raise ValueError(f"unknown environment preset: {name!r} (known: {sorted(PRESETS)})")
    spec = PRESETS[name]()
    if overrides:
        spec = dataclasses.replace(spec, **overrides)
    return spec
