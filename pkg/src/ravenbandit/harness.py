"""Deterministic simulation loop, metrics, and multi-trial aggregation.

A trial is a pure function of ``(policy spec, environment spec, horizon,
trial seed)``. All randomness inside it comes from streams derived off
the trial seed: environment initialisation, environment drift, reward
noise (counter-based, keyed by step and arm) and the policy's own
stream (keyed additionally by the policy's canonical name). Policies
compared under the same trial seed therefore face bit-identical
environment trajectories and reward noise, and trials can run in any
order or in parallel without changing a single output bit.

Regret is dynamic: the instantaneous regret at step t is
``max_k mu_k(t) - mu_{chosen}(t)`` over the currently active arms,
computed from the true (hidden) means. A step is a suboptimal pull when
the chosen arm differs from the current oracle arm.
"""

from __future__ import annotations

import dataclasses
import time
from dataclasses import dataclass, field
from multiprocessing import get_context

import numpy as np

from .environments import EnvironmentSpec, advance, init_state, oracle_best, sample_reward
from .policies import PolicySpec, canonical_name, make_policy
from .rng import ENV_DRIFT, ENV_INIT, POLICY, RewardNoise, derive_rng, derive_seed

# test-only policy kind: always plays the oracle arm (zero regret by definition)
ORACLE_KIND = "oracle"


@dataclass
class TrialResult:
    """Full per-step record of one (policy, environment, seed) run."""

    chosen_arms: np.ndarray
    rewards: np.ndarray
    inst_regret: np.ndarray
    cum_reward: float
    cum_regret: float
    suboptimal_pulls: int
    seed: int


@dataclass(frozen=True)
class TrialSummary:
    """Scalar outcomes of one trial (one row of trials.csv)."""

    trial: int
    cum_reward: float
    cum_regret: float
    suboptimal_pulls: int
    seed: int


@dataclass
class ExperimentResult:
    """Cross-trial aggregates for a set of policies on one environment."""

    policy_names: list[str]
    horizon: int
    n_trials: int
    checkpoint_steps: np.ndarray
    trials: dict[str, list[TrialSummary]]
    regret_curves: dict[str, np.ndarray]   # [n_trials, n_checkpoints]
    reward_curves: dict[str, np.ndarray]
    runtimes: dict[str, float] = field(default_factory=dict)  # wall seconds, not exported to CSV

    _METRICS = ("cum_regret", "cum_reward", "suboptimal_pulls")

    def metric_values(self, policy: str, metric: str) -> np.ndarray:
        if metric not in self._METRICS:
            raise ValueError(f"unknown metric: {metric!r}")
        return np.array([getattr(s, metric) for s in self.trials[policy]], dtype=float)

    def summary(self) -> dict[str, dict[str, tuple[float, float]]]:
        """Per-policy (mean, sample stddev) of every metric; stddev is 0
        for a single trial."""
        out: dict[str, dict[str, tuple[float, float]]] = {}
        for name in self.policy_names:
            out[name] = {}
            for metric in self._METRICS:
                vals = self.metric_values(name, metric)
                std = float(np.std(vals, ddof=1)) if len(vals) > 1 else 0.0
                out[name][metric] = (float(np.mean(vals)), std)
        return out

    def mean_metric(self, policy: str, metric: str) -> float:
        return float(np.mean(self.metric_values(policy, metric)))


@dataclass
class RegretScalingReport:
    """How regret and suboptimal pulls grow with the horizon."""

    horizons: list[int]
    candidate: str
    baseline: str
    mean_regret: dict[str, list[float]]
    mean_suboptimal: dict[str, list[float]]
    reduction_pct: list[float]
    fits: dict[str, tuple[float, float, float]]  # policy -> (slope, intercept, r2) vs ln T
    mean_min_gap: float
    mean_sigma2_max: float


def checkpoint_schedule(horizon: int, stride: int | None = None) -> np.ndarray:
    """Steps at which cumulative curves are recorded; always ends at the
    horizon. Default stride keeps at most ~1000 checkpoints."""
    if stride is None:
        stride = max(1, horizon // 1000)
    if stride < 1:
        raise ValueError(f"checkpoint stride must be positive, got {stride}")
    steps = list(range(stride, horizon + 1, stride))
    if not steps or steps[-1] != horizon:
        steps.append(horizon)
    return np.array(steps, dtype=np.int64)


def run_trial(policy: PolicySpec, env: EnvironmentSpec, horizon: int, seed: int) -> TrialResult:
    """Execute one select / reward / observe / advance loop.

    ``seed`` is the per-trial seed; within it the policy stream is keyed
    by the policy's canonical name so that adding or removing other
    policies from an experiment never perturbs this trial.
    """
    if horizon < env.total_slots:
        raise ValueError(f"horizon {horizon} shorter than the arm count {env.total_slots}")
    if horizon > env.horizon:
        env = dataclasses.replace(env, horizon=horizon)
    is_oracle = policy.kind == ORACLE_KIND
    state = init_state(env, derive_rng(seed, ENV_INIT))
    drift_rng = derive_rng(seed, ENV_DRIFT)
    noise = RewardNoise(seed, 0)
    if is_oracle:
        agent = None
    else:
        policy_rng = derive_rng(seed, POLICY, canonical_name(policy))
        agent = make_policy(
            policy,
            state.n_slots,
            rng=policy_rng,
            family=env.family,
            reward_bound=env.reward_bound(),
        )

    chosen = np.empty(horizon, dtype=np.int64)
    rewards = np.empty(horizon, dtype=float)
    inst_regret = np.empty(horizon, dtype=float)
    suboptimal = 0
    for t in range(1, horizon + 1):
        try:
            advance(state, t, drift_rng)
            best_arm, best_mu = oracle_best(state)
            if is_oracle:
                arm = best_arm
            else:
                arm = agent.select(t, state.active_arms())
            r = sample_reward(state, arm, noise)
            if agent is not None:
                agent.observe(arm, r)
        except Exception as exc:
            raise RuntimeError(f"trial with seed {seed} failed at step {t}: {exc}") from exc
        chosen[t - 1] = arm
        rewards[t - 1] = r
        inst_regret[t - 1] = best_mu - float(state.mu[arm])
        if arm != best_arm:
            suboptimal += 1

    return TrialResult(
        chosen_arms=chosen,
        rewards=rewards,
        inst_regret=inst_regret,
        cum_reward=float(np.sum(rewards)),
        cum_regret=float(np.sum(inst_regret)),
        suboptimal_pulls=suboptimal,
        seed=seed,
    )


def simulate_trajectory(env: EnvironmentSpec, horizon: int, seed: int):
    """True-parameter trajectory for one trial seed, with no policy.

    Returns ``(mu, sigma2, active, resets)``: arrays of shape
    [horizon, slots] where row t-1 holds the parameters in force at step
    t, plus a dict of step -> arms redrawn at that step. Because the
    environment's evolution never depends on policy choices, this is
    exactly what any policy run under the same seed experiences.
    """
    if horizon > env.horizon:
        env = dataclasses.replace(env, horizon=horizon)
    state = init_state(env, derive_rng(seed, ENV_INIT))
    drift_rng = derive_rng(seed, ENV_DRIFT)
    slots = state.n_slots
    mu = np.empty((horizon, slots))
    sigma2 = np.empty((horizon, slots))
    active = np.empty((horizon, slots), dtype=bool)
    resets = {}
    for t in range(1, horizon + 1):
        advance(state, t, drift_rng)
        mu[t - 1] = state.mu
        if env.family == "bernoulli":
            sigma2[t - 1] = state.mu * (1.0 - state.mu)
        else:
            sigma2[t - 1] = state.sigma2
        active[t - 1] = state.active
        if state.last_reset is not None:
            resets[t] = state.last_reset
    return mu, sigma2, active, resets


def trial_seed(master_seed: int, trial: int) -> int:
    """Per-trial seed derived from the experiment's master seed."""
    return derive_seed(master_seed, "trial", trial)


def _summarize_trial(args) -> tuple[str, int, TrialSummary, np.ndarray, np.ndarray, float]:
    policy, env, horizon, trial, seed, steps = args
    t0 = time.perf_counter()
    result = run_trial(policy, env, horizon, seed)
    elapsed = time.perf_counter() - t0
    cum_regret = np.cumsum(result.inst_regret)[steps - 1]
    cum_reward = np.cumsum(result.rewards)[steps - 1]
    summary = TrialSummary(
        trial=trial,
        cum_reward=result.cum_reward,
        cum_regret=result.cum_regret,
        suboptimal_pulls=result.suboptimal_pulls,
        seed=seed,
    )
    name = policy.kind if policy.kind == ORACLE_KIND else canonical_name(policy)
    return name, trial, summary, cum_regret, cum_reward, elapsed


def run_experiment(
    policies: list[PolicySpec],
    env: EnvironmentSpec,
    horizon: int,
    n_trials: int,
    master_seed: int,
    parallel: int = 1,
    checkpoint_stride: int | None = None,
) -> ExperimentResult:
    """Run every policy over ``n_trials`` shared environment trials.

    Trial i derives its seed from ``(master_seed, i)``; all policies
    share it, so comparisons use common random numbers. Results are
    reduced in (policy, trial) order whatever the execution order, so
    any ``parallel`` level produces identical output.
    """
    if n_trials < 1:
        raise ValueError(f"n_trials must be at least 1, got {n_trials}")
    if parallel < 1:
        raise ValueError(f"parallel must be at least 1, got {parallel}")
    names = [p.kind if p.kind == ORACLE_KIND else canonical_name(p) for p in policies]
    if len(set(names)) != len(names):
        raise ValueError(f"duplicate policies in experiment: {sorted(names)}")

    steps = checkpoint_schedule(horizon, checkpoint_stride)
    tasks = [
        (policy, env, horizon, trial, trial_seed(master_seed, trial), steps)
        for policy in policies
        for trial in range(n_trials)
    ]
    if parallel > 1 and len(tasks) > 1:
        with get_context("fork").Pool(processes=parallel) as pool:
            raw = pool.map(_summarize_trial, tasks, chunksize=1)
    else:
        raw = [_summarize_trial(task) for task in tasks]

    by_key = {(name, trial): (summ, creg, crew, dt) for name, trial, summ, creg, crew, dt in raw}
    trials: dict[str, list[TrialSummary]] = {}
    regret_curves: dict[str, np.ndarray] = {}
    reward_curves: dict[str, np.ndarray] = {}
    runtimes: dict[str, float] = {}
    for name in names:
        rows = [by_key[(name, i)] for i in range(n_trials)]
        trials[name] = [r[0] for r in rows]
        regret_curves[name] = np.stack([r[1] for r in rows])
        reward_curves[name] = np.stack([r[2] for r in rows])
        runtimes[name] = float(np.mean([r[3] for r in rows]))

    return ExperimentResult(
        policy_names=list(names),
        horizon=horizon,
        n_trials=n_trials,
        checkpoint_steps=steps,
        trials=trials,
        regret_curves=regret_curves,
        reward_curves=reward_curves,
        runtimes=runtimes,
    )


def regret_reduction(r_baseline: float, r_candidate: float) -> float:
    """Normalized regret reduction of the candidate, in percent."""
    if r_baseline <= 0:
        raise ValueError(f"regret reduction undefined for baseline regret {r_baseline}")
    return (r_baseline - r_candidate) / r_baseline * 100.0


def _linear_fit(x: np.ndarray, y: np.ndarray) -> tuple[float, float, float]:
    """Least-squares line y = slope*x + intercept, with R^2."""
    slope, intercept = np.polyfit(x, y, 1)
    pred = slope * x + intercept
    ss_res = float(np.sum((y - pred) ** 2))
    ss_tot = float(np.sum((y - np.mean(y)) ** 2))
    r2 = 1.0 if ss_tot == 0.0 else 1.0 - ss_res / ss_tot
    return float(slope), float(intercept), r2


def _gap_and_variance(env: EnvironmentSpec, n_trials: int, master_seed: int) -> tuple[float, float]:
    """Mean initial suboptimality gap and max true variance across trials
    (reporting only; single-arm or tied environments yield a zero gap)."""
    gaps, var_maxes = [], []
    for trial in range(n_trials):
        state = init_state(env, derive_rng(trial_seed(master_seed, trial), ENV_INIT))
        mu = state.mu[state.active]
        if env.family == "bernoulli":
            var = mu * (1.0 - mu)
        else:
            var = state.sigma2[state.active]
        best = float(np.max(mu))
        others = mu[mu < best]
        gaps.append(best - float(np.max(others)) if len(others) else 0.0)
        var_maxes.append(float(np.max(var)))
    return float(np.mean(gaps)), float(np.mean(var_maxes))


def scaling_check(
    policy_a: PolicySpec,
    policy_b: PolicySpec,
    env: EnvironmentSpec,
    horizons: list[int],
    n_trials: int,
    master_seed: int,
    parallel: int = 1,
) -> RegretScalingReport:
    """Regret reduction of ``policy_a`` over baseline ``policy_b`` across
    horizons, plus least-squares fits of suboptimal pulls against ln T.

    All horizons reuse the same trial seeds, so a shorter run is exactly
    a prefix of a longer one.
    """
    if len(horizons) < 3:
        raise ValueError("scaling fit refused: need at least 3 horizons")
    if any(b <= a for a, b in zip(horizons, horizons[1:])):
        raise ValueError(f"horizons must be strictly increasing, got {horizons}")
    name_a, name_b = canonical_name(policy_a), canonical_name(policy_b)
    roster = [policy_a] if name_a == name_b else [policy_a, policy_b]
    mean_regret: dict[str, list[float]] = {name_a: [], name_b: []}
    mean_subopt: dict[str, list[float]] = {name_a: [], name_b: []}
    reductions = []
    for horizon in horizons:
        res = run_experiment(roster, env, horizon, n_trials, master_seed, parallel=parallel)
        for name in dict.fromkeys((name_a, name_b)):
            mean_regret[name].append(res.mean_metric(name, "cum_regret"))
            mean_subopt[name].append(res.mean_metric(name, "suboptimal_pulls"))
        reductions.append(regret_reduction(mean_regret[name_b][-1], mean_regret[name_a][-1]))

    log_t = np.log(np.array(horizons, dtype=float))
    fits = {
        name: _linear_fit(log_t, np.array(mean_subopt[name]))
        for name in (name_a, name_b)
    }
    gap, sigma2_max = _gap_and_variance(env, n_trials, master_seed)
    return RegretScalingReport(
        horizons=list(horizons),
        candidate=name_a,
        baseline=name_b,
        mean_regret=mean_regret,
        mean_suboptimal=mean_subopt,
        reduction_pct=reductions,
        fits=fits,
        mean_min_gap=gap,
        mean_sigma2_max=sigma2_max,
    )
