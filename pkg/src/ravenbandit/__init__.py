"""Variance-adaptive multi-armed bandits with a reproducible benchmark
harness for non-stationary reward environments."""

from .environments import (
    ArmDistribution,
    EnvironmentSpec,
    EnvironmentState,
    PRESETS,
    advance,
    init_state,
    make_bernoulli_experiment,
    make_logistics_env,
    oracle_best,
    preset,
    sample_reward,
)
from .harness import (
    ExperimentResult,
    RegretScalingReport,
    TrialResult,
    TrialSummary,
    regret_reduction,
    run_experiment,
    run_trial,
    scaling_check,
    simulate_trajectory,
)
from .policies import (
    PolicySpec,
    RavenConfig,
    canonical_name,
    decay_coefficient,
    make_policy,
    raven_score,
    ucb1_score,
    ucbv_score,
)
from .streaming import StreamingStats, batch_oracle
from .sweep import SweepGrid, SweepResult, TuneResult, grid_sweep, random_search

__version__ = "0.1.0"

__all__ = [
    "ArmDistribution",
    "EnvironmentSpec",
    "EnvironmentState",
    "ExperimentResult",
    "PRESETS",
    "PolicySpec",
    "RavenConfig",
    "RegretScalingReport",
    "StreamingStats",
    "SweepGrid",
    "SweepResult",
    "TrialResult",
    "TrialSummary",
    "TuneResult",
    "advance",
    "batch_oracle",
    "canonical_name",
    "decay_coefficient",
    "grid_sweep",
    "init_state",
    "make_bernoulli_experiment",
    "make_logistics_env",
    "make_policy",
    "oracle_best",
    "preset",
    "random_search",
    "raven_score",
    "regret_reduction",
    "run_experiment",
    "run_trial",
    "sample_reward",
    "scaling_check",
    "simulate_trajectory",
    "ucb1_score",
    "ucbv_score",
]
