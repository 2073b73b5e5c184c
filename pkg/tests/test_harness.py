"""Simulation loop determinism, regret accounting, and scaling reports."""

import numpy as np
import pytest

from ravenbandit.environments import EnvironmentSpec, preset
from ravenbandit.harness import (
    ORACLE_KIND,
    checkpoint_schedule,
    regret_reduction,
    run_experiment,
    run_trial,
    scaling_check,
    simulate_trajectory,
    trial_seed,
)
from ravenbandit.policies import PolicySpec
from ravenbandit.rng import RewardNoise


def bernoulli_env(means, horizon=1000):
    k = len(means)
    return EnvironmentSpec("stationary", "bernoulli", k, horizon,
                           init_means=tuple(means), mean_range=(0.0, 1.0))


class TestRunTrial:
    def test_single_arm_has_zero_regret(self):
        env = bernoulli_env([0.6])
        for kind in ("ucb1", "epsilon_greedy"):
            res = run_trial(PolicySpec(kind), env, 200, seed=5)
            assert res.cum_regret == 0.0
            assert res.suboptimal_pulls == 0

    def test_oracle_policy_has_zero_regret(self):
        env = preset("logistics-desk")
        res = run_trial(PolicySpec(ORACLE_KIND), env, 3000, seed=9)
        assert res.cum_regret == 0.0
        assert res.suboptimal_pulls == 0
        assert np.all(res.inst_regret == 0.0)

    def test_wide_gap_rarely_misidentified(self):
        # gap of 0.8: only a handful of suboptimal pulls expected by T=1000
        env = bernoulli_env([0.9, 0.1])
        good = 0
        for trial in range(100):
            res = run_trial(PolicySpec("raven_ucb"), env, 1000, seed=trial_seed(31, trial))
            good += res.suboptimal_pulls < 100
        assert good >= 95

    def test_regret_identity_against_trajectory(self):
        env = preset("logistics-desk")
        seed = trial_seed(3, 0)
        res = run_trial(PolicySpec("ucb1"), env, 2500, seed=seed)
        mu, _, active, _ = simulate_trajectory(env, 2500, seed)
        best = np.max(np.where(active, mu, -np.inf), axis=1)
        picked = mu[np.arange(2500), res.chosen_arms]
        assert np.array_equal(res.inst_regret, best - picked)
        assert res.cum_regret == float(np.sum(res.inst_regret))
        assert res.cum_reward == float(np.sum(res.rewards))

    def test_cumulative_regret_is_monotone(self):
        env = preset("incremental")
        res = run_trial(PolicySpec("thompson_gaussian"), env, 1500, seed=trial_seed(1, 0))
        assert np.all(res.inst_regret >= 0.0)
        assert np.all(np.diff(np.cumsum(res.inst_regret)) >= -1e-15)

    def test_suboptimal_pulls_bounded_by_horizon(self):
        env = bernoulli_env([0.5, 0.52])
        res = run_trial(PolicySpec("ucb1"), env, 300, seed=1)
        assert 0 <= res.suboptimal_pulls <= 300

    def test_deterministic_given_seed(self):
        env = preset("gradual")
        a = run_trial(PolicySpec("thompson_beta"), env, 800, seed=123)
        b = run_trial(PolicySpec("thompson_beta"), env, 800, seed=123)
        assert np.array_equal(a.chosen_arms, b.chosen_arms)
        assert np.array_equal(a.rewards, b.rewards)

    def test_horizon_shorter_than_arms_rejected(self):
        with pytest.raises(ValueError, match="horizon"):
            run_trial(PolicySpec("ucb1"), preset("logistics-desk"), 10, seed=0)

    def test_failures_carry_step_context(self, monkeypatch):
        import ravenbandit.harness as hm

        real = hm.sample_reward
        calls = {"n": 0}

        def flaky(state, arm, noise):
            calls["n"] += 1
            if calls["n"] == 51:
                raise ValueError("boom")
            return real(state, arm, noise)

        monkeypatch.setattr(hm, "sample_reward", flaky)
        env = bernoulli_env([0.5, 0.6], horizon=100)
        with pytest.raises(RuntimeError, match="failed at step 51"):
            run_trial(PolicySpec("ucb1"), env, 100, seed=0)


class TestRewardNoiseSharing:
    def test_noise_is_a_pure_function_of_the_key(self):
        a = RewardNoise(42, 3)
        b = RewardNoise(42, 3)
        for t in (1, 10, 500):
            for arm in (0, 5):
                assert a.uniform(t, arm) == b.uniform(t, arm)
                assert a.normal(t, arm) == b.normal(t, arm)
        assert RewardNoise(42, 4).uniform(1, 0) != a.uniform(1, 0)

    def test_policies_share_trajectories_within_a_trial(self):
        env = preset("logistics-desk")
        seed = trial_seed(17, 2)
        r1 = run_trial(PolicySpec("ucb1"), env, 1000, seed=seed)
        r2 = run_trial(PolicySpec("raven_ucb"), env, 1000, seed=seed)
        # same steps where both picked the same arm => identical rewards
        same = r1.chosen_arms == r2.chosen_arms
        assert same.any()
        assert np.array_equal(r1.rewards[same], r2.rewards[same])


class TestRunExperiment:
    def test_single_trial_degeneracy(self):
        env = bernoulli_env([0.7, 0.3])
        res = run_experiment([PolicySpec("ucb1")], env, 300, 1, master_seed=4)
        summ = res.summary()["ucb1"]
        trial = res.trials["ucb1"][0]
        assert summ["cum_regret"] == (trial.cum_regret, 0.0)
        assert summ["cum_reward"] == (trial.cum_reward, 0.0)

    def test_rerun_is_bit_identical(self):
        env = preset("blips")
        specs = [PolicySpec("raven_ucb"), PolicySpec("sw_ucb", {"window": 50})]
        a = run_experiment(specs, env, 600, 3, master_seed=8)
        b = run_experiment(specs, env, 600, 3, master_seed=8)
        assert a.trials == b.trials
        for name in a.policy_names:
            assert np.array_equal(a.regret_curves[name], b.regret_curves[name])

    def test_parallel_matches_serial(self):
        env = preset("periodic")
        specs = [PolicySpec("ucb1"), PolicySpec("d_ucb")]
        serial = run_experiment(specs, env, 500, 4, master_seed=6, parallel=1)
        parallel = run_experiment(specs, env, 500, 4, master_seed=6, parallel=4)
        assert serial.trials == parallel.trials
        for name in serial.policy_names:
            assert np.array_equal(serial.regret_curves[name], parallel.regret_curves[name])
            assert np.array_equal(serial.reward_curves[name], parallel.reward_curves[name])

    def test_aggregates_recomputable_from_trial_table(self):
        env = bernoulli_env([0.8, 0.6, 0.4])
        res = run_experiment([PolicySpec("epsilon_greedy")], env, 400, 6, master_seed=2)
        name = res.policy_names[0]
        regrets = np.array([t.cum_regret for t in res.trials[name]])
        assert res.summary()[name]["cum_regret"][0] == float(np.mean(regrets))
        assert res.summary()[name]["cum_regret"][1] == float(np.std(regrets, ddof=1))

    def test_adding_a_policy_leaves_others_untouched(self):
        env = preset("gradual")
        small = run_experiment([PolicySpec("ucb1")], env, 400, 3, master_seed=10)
        big = run_experiment([PolicySpec("ucb1"), PolicySpec("thompson_beta")], env, 400, 3,
                             master_seed=10)
        assert small.trials["ucb1"] == big.trials["ucb1"]

    def test_duplicate_policies_rejected(self):
        env = bernoulli_env([0.5, 0.6])
        with pytest.raises(ValueError, match="duplicate"):
            run_experiment([PolicySpec("ucb1"), PolicySpec("ucb1")], env, 100, 1, 0)

    def test_invalid_counts_rejected(self):
        env = bernoulli_env([0.5, 0.6])
        with pytest.raises(ValueError, match="n_trials"):
            run_experiment([PolicySpec("ucb1")], env, 100, 0, 0)
        with pytest.raises(ValueError, match="parallel"):
            run_experiment([PolicySpec("ucb1")], env, 100, 1, 0, parallel=0)


class TestCheckpointSchedule:
    def test_default_stride(self):
        steps = checkpoint_schedule(10000)
        assert steps[0] == 10 and steps[-1] == 10000 and len(steps) == 1000

    def test_short_horizon_keeps_every_step(self):
        assert list(checkpoint_schedule(5)) == [1, 2, 3, 4, 5]

    def test_horizon_always_last(self):
        steps = checkpoint_schedule(103, stride=20)
        assert list(steps) == [20, 40, 60, 80, 100, 103]


class TestRegretReduction:
    def test_examples(self):
        assert regret_reduction(100.0, 16.0) == pytest.approx(84.0)
        assert regret_reduction(57.3, 57.3) == 0.0
        assert regret_reduction(100.0, 0.0) == 100.0

    def test_baseline_must_be_positive(self):
        with pytest.raises(ValueError, match="undefined"):
            regret_reduction(0.0, 5.0)
        with pytest.raises(ValueError, match="undefined"):
            regret_reduction(-1.0, 5.0)


class TestScalingCheck:
    def test_too_few_horizons_refused(self):
        env = bernoulli_env([0.9, 0.5])
        with pytest.raises(ValueError, match="refused"):
            scaling_check(PolicySpec("raven_ucb"), PolicySpec("ucb1"), env, [100, 200], 2, 0)

    def test_horizons_must_increase(self):
        env = bernoulli_env([0.9, 0.5])
        with pytest.raises(ValueError, match="increasing"):
            scaling_check(PolicySpec("raven_ucb"), PolicySpec("ucb1"), env, [100, 100, 200], 2, 0)

    def test_self_comparison_reduces_nothing(self):
        env = bernoulli_env([0.9, 0.5])
        report = scaling_check(PolicySpec("ucb1"), PolicySpec("ucb1"), env,
                               [100, 200, 400], 2, master_seed=3)
        assert report.reduction_pct == [0.0, 0.0, 0.0]

    def test_report_contents(self):
        env = preset("bernoulli-s4.1")
        report = scaling_check(PolicySpec("raven_ucb"), PolicySpec("ucb1"), env,
                               [200, 400, 800], 3, master_seed=5)
        assert report.horizons == [200, 400, 800]
        assert set(report.fits) == {report.candidate, report.baseline}
        for slope, intercept, r2 in report.fits.values():
            assert np.isfinite([slope, intercept, r2]).all()
        assert 0.0 < report.mean_sigma2_max <= 0.25  # bernoulli variance cap
        assert report.mean_min_gap > 0.0
