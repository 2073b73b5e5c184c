"""Policy scores, selection rules, and the uniform interface contract."""

import math

import numpy as np
import pytest

from ravenbandit.policies import (
    DiscountedUCB,
    EpsilonGreedy,
    FDSWTSMin,
    PolicySpec,
    RavenConfig,
    RavenUCB,
    SlidingWindowUCB,
    ThompsonBeta,
    ThompsonGaussian,
    UCB1,
    UCBV,
    canonical_name,
    decay_coefficient,
    make_policy,
    normalize_spec,
    raven_score,
    ucb1_score,
    ucbv_score,
)
from ravenbandit.streaming import StreamingStats


def stats_for(count: int, mean: float, var: float) -> StreamingStats:
    m2 = var * (count - 1) if count >= 2 else 0.0
    return StreamingStats(count, mean, m2)


class TestRavenScore:
    def test_hand_evaluated_example(self):
        # M=0.5, N=4, S^2=0.04, t=10, alpha0=1, beta0=1, eps=0.001
        cfg = RavenConfig(1.0, 1.0, 0.001)
        alpha_t = decay_coefficient(10, cfg)
        assert alpha_t == pytest.approx(0.43428, abs=1e-5)
        expected = 0.5 + alpha_t * math.sqrt(math.log(11) / 5) + math.sqrt(0.04 / 5 + 0.001)
        score = raven_score(stats_for(4, 0.5, 0.04), 10, cfg)
        assert score == expected
        assert score == pytest.approx(0.8956, abs=1e-4)

    def test_pure_exploitation_limit(self):
        cfg = RavenConfig(alpha0=1e-12, beta0=0.0, epsilon=1e-12)
        assert raven_score(stats_for(4, 0.5, 0.04), 10, cfg) == pytest.approx(0.5, abs=1e-6)

    def test_symmetry(self):
        cfg = RavenConfig(2.0, 3.0, 0.01)
        a = raven_score(stats_for(7, 0.3, 0.2), 42, cfg)
        b = raven_score(stats_for(7, 0.3, 0.2), 42, cfg)
        assert a == b

    def test_variance_monotonicity(self):
        cfg = RavenConfig(1.0, 0.5, 0.001)
        scores = [raven_score(stats_for(10, 0.5, v), 30, cfg) for v in (0.0, 0.1, 0.2, 0.5)]
        assert all(lo < hi for lo, hi in zip(scores, scores[1:]))

    def test_decay_monotone_decreasing(self):
        for eps in (0.001, 0.1, 0.5):
            cfg = RavenConfig(1.0, 1.0, eps)
            alphas = [decay_coefficient(t, cfg) for t in range(2, 200)]
            assert all(a > b for a, b in zip(alphas, alphas[1:]))

    def test_invalid_step_rejected(self):
        with pytest.raises(ValueError, match="invalid step"):
            decay_coefficient(0, RavenConfig())


class TestRavenConfig:
    @pytest.mark.parametrize(
        "kwargs,msg",
        [
            ({"alpha0": 0.0}, "alpha0"),
            ({"alpha0": -1.0}, "alpha0"),
            ({"beta0": -0.5}, "beta0"),
            ({"epsilon": 0.0}, "epsilon"),
            ({"epsilon": 0.6}, "epsilon"),
        ],
    )
    def test_out_of_range_rejected(self, kwargs, msg):
        with pytest.raises(ValueError, match=msg):
            RavenConfig(**kwargs)


class TestBaselineScores:
    def test_ucb1_hand_example(self):
        score = ucb1_score(stats_for(4, 0.5, 0.0), 10)
        assert score == 0.5 + math.sqrt(2 * math.log(10) / 4)
        assert score == pytest.approx(1.5730, abs=1e-4)

    def test_ucb1_exploration_vanishes(self):
        assert ucb1_score(stats_for(10**9, 0.5, 0.0), 10) == pytest.approx(0.5, abs=1e-3)

    def test_ucb1_symmetry_and_unpulled_error(self):
        assert ucb1_score(stats_for(3, 0.2, 0.0), 9) == ucb1_score(stats_for(3, 0.2, 0.0), 9)
        with pytest.raises(ValueError, match="unpulled"):
            ucb1_score(StreamingStats(), 5)

    def test_ucbv_hand_example(self):
        score = ucbv_score(stats_for(10, 0.5, 0.0), 10, reward_bound=1.0)
        assert score == pytest.approx(0.5 + 3 * math.log(10) / 10)
        assert score == pytest.approx(1.1908, abs=1e-4)

    def test_ucbv_at_t_one_is_the_mean(self):
        assert ucbv_score(stats_for(5, 0.37, 0.0), 1) == 0.37

    def test_ucbv_monotone_in_variance(self):
        lo = ucbv_score(stats_for(8, 0.5, 0.01), 20)
        hi = ucbv_score(stats_for(8, 0.5, 0.5), 20)
        assert hi > lo

    def test_ucbv_unpulled_error(self):
        with pytest.raises(ValueError, match="unpulled"):
            ucbv_score(StreamingStats(), 5)


class TestSelection:
    def test_round_robin_starts_at_lowest_index(self):
        p = UCB1(3)
        assert p.select(1, [0, 1, 2]) == 0

    def test_round_robin_completeness_all_kinds(self):
        rng = np.random.default_rng(0)
        k = 4
        policies = [
            RavenUCB(k),
            UCB1(k),
            UCBV(k),
            EpsilonGreedy(k, np.random.default_rng(1), epsilon=0.3),
            ThompsonBeta(k, np.random.default_rng(2)),
            ThompsonGaussian(k, np.random.default_rng(3)),
            SlidingWindowUCB(k, window=10),
            DiscountedUCB(k, gamma=0.9),
            FDSWTSMin(k, np.random.default_rng(4)),
        ]
        for p in policies:
            pulled = []
            for t in range(1, k + 1):
                arm = p.select(t, range(k))
                pulled.append(arm)
                p.observe(arm, float(rng.random()))
            assert sorted(pulled) == list(range(k)), type(p).__name__

    def test_tie_breaks_to_lowest_index(self):
        p = UCB1(3)
        for arm, r in [(0, 0.2), (1, 0.9), (2, 0.9)]:
            p.observe(arm, r)
        assert p.select(4, [0, 1, 2]) == 1

    def test_variance_term_prefers_volatile_arm(self):
        # equal means and counts; only arm 0 has spread in its rewards
        p = RavenUCB(2, RavenConfig(alpha0=1.0, beta0=1.0, epsilon=0.001))
        p.stats[0] = stats_for(10, 0.5, 0.25)
        p.stats[1] = stats_for(10, 0.5, 0.0)
        p.counts = [10, 10]
        assert p.select(21, [0, 1]) == 0

    def test_argmax_shift_invariance(self):
        rng = np.random.default_rng(42)
        for ctor in (lambda: RavenUCB(3), lambda: UCB1(3), lambda: UCBV(3)):
            base, shifted = ctor(), ctor()
            for policy, offset in ((base, 0.0), (shifted, 17.5)):
                rr = np.random.default_rng(7)
                for arm in range(3):
                    for _ in range(arm + 2):
                        policy.counts[arm] += 1
                        policy.stats[arm].update(float(rr.normal(0.4 + 0.1 * arm, 0.2)) + offset)
            for t in range(10, 20):
                assert base.select(t, [0, 1, 2]) == shifted.select(t, [0, 1, 2])

    def test_empty_active_set_rejected(self):
        with pytest.raises(ValueError, match="empty active set"):
            UCB1(3).select(1, [])

    def test_deterministic_kinds_bit_identical(self):
        rewards = np.random.default_rng(8).random(300)
        for spec in [PolicySpec("raven_ucb"), PolicySpec("ucb1"), PolicySpec("ucb_v"),
                     PolicySpec("sw_ucb", {"window": 20}), PolicySpec("d_ucb", {"gamma": 0.9})]:
            seqs = []
            for _ in range(2):
                p = make_policy(spec, 3)
                chosen = []
                for t, r in enumerate(rewards, start=1):
                    arm = p.select(t, [0, 1, 2])
                    chosen.append(arm)
                    p.observe(arm, float(r) + 0.1 * arm)
                seqs.append(chosen)
            assert seqs[0] == seqs[1], spec.kind


class TestObserve:
    def test_first_observation(self):
        p = UCB1(2)
        p.observe(0, 0.7)
        assert p.counts[0] == 1
        assert p.stats[0].mean == 0.7
        assert p.stats[0].variance() == 0.0
        assert p.t == 2

    def test_step_counter_tracks_observations(self):
        p = UCB1(2)
        assert p.t == 1
        for i in range(5):
            p.observe(i % 2, 0.5)
        assert p.t == 6

    def test_thompson_beta_conjugate_update(self):
        p = ThompsonBeta(2, np.random.default_rng(0))
        p.observe(0, 1.0)
        assert (p.a[0], p.b[0]) == (2.0, 1.0)
        p.observe(0, 0.0)
        assert (p.a[0], p.b[0]) == (2.0, 2.0)

    def test_sliding_window_evicts_oldest(self):
        p = SlidingWindowUCB(1, window=3)
        for r in [1.0, 2.0, 3.0, 4.0]:
            p.observe(0, r)
        assert list(p.buffers[0]) == [2.0, 3.0, 4.0]
        assert p.windowed_mean(0) == 3.0

    def test_inactive_arm_rejected(self):
        p = UCB1(3)
        p.select(1, [0, 1])
        with pytest.raises(ValueError, match="not active"):
            p.observe(2, 0.5)

    def test_out_of_range_arm_rejected(self):
        with pytest.raises(ValueError, match="outside range"):
            UCB1(2).observe(5, 0.1)


class TestRandomizedBaselines:
    def test_epsilon_zero_is_greedy(self):
        rng = np.random.default_rng(3)
        p = EpsilonGreedy(3, np.random.default_rng(1), epsilon=0.0)
        means = {}
        for arm, m in [(0, 0.2), (1, 0.8), (2, 0.5)]:
            for _ in range(5):
                r = float(rng.normal(m, 0.05))
                p.observe(arm, r)
            means[arm] = p.stats[arm].mean
        greedy = max(means, key=lambda k: (means[k], -k))
        for t in range(16, 30):
            assert p.select(t, [0, 1, 2]) == greedy

    def test_epsilon_one_explores_uniformly(self):
        p = EpsilonGreedy(3, np.random.default_rng(5), epsilon=1.0)
        for arm in range(3):
            p.observe(arm, float(arm))
        picks = {p.select(t, [0, 1, 2]) for t in range(4, 200)}
        assert picks == {0, 1, 2}

    def test_thompson_beta_posterior_ordering(self):
        rng = np.random.default_rng(12)
        p = ThompsonBeta(2, rng)
        p.a, p.b = [1000.0, 1.0], [1.0, 1000.0]
        p.counts = [1, 1]
        hits = sum(p.select(t, [0, 1]) == 0 for t in range(2, 1002))
        assert hits / 1000 > 0.99

    def test_thompson_gaussian_posterior(self):
        p = ThompsonGaussian(1, np.random.default_rng(0))
        for r in (1.0, 2.0, 3.0):
            p.observe(0, r)
        mean, var = p._posterior(0)
        assert mean == pytest.approx(6.0 / 4.0)
        assert var == pytest.approx(1.0 / 4.0)

    def test_ducb_gamma_one_matches_ucb1(self):
        rewards = np.random.default_rng(21).random(400)
        ducb = DiscountedUCB(3, gamma=1.0)
        ucb = UCB1(3)
        for t, r in enumerate(rewards, start=1):
            a1 = ducb.select(t, [0, 1, 2])
            a2 = ucb.select(t, [0, 1, 2])
            assert a1 == a2
            reward = float(r) + 0.05 * a1
            ducb.observe(a1, reward)
            ucb.observe(a2, reward)

    def test_fdsw_min_is_pessimistic(self):
        # identical evidence in both tracks: min of two samples is <= either
        rng = np.random.default_rng(9)
        p = FDSWTSMin(2, rng, gamma=0.9, window=5, family="gaussian")
        for _ in range(20):
            p.observe(0, 1.0)
            p.observe(1, 1.0)
        arm = p.select(41, [0, 1])
        assert arm in (0, 1)


class TestSpecs:
    def test_normalize_fills_defaults(self):
        spec = normalize_spec(PolicySpec("raven_ucb", {"beta0": 5.0}))
        assert spec.params == {"alpha0": 1.0, "beta0": 5.0, "epsilon": 0.001}

    def test_canonical_name_is_stable(self):
        a = canonical_name(PolicySpec("raven_ucb", {"beta0": 5.0, "alpha0": 1.0}))
        b = canonical_name(PolicySpec("raven_ucb", {"alpha0": 1.0, "beta0": 5.0}))
        assert a == b == "raven_ucb[alpha0=1.0,beta0=5.0,epsilon=0.001]"
        assert canonical_name(PolicySpec("ucb1")) == "ucb1"

    def test_unknown_kind_rejected(self):
        with pytest.raises(ValueError, match="unknown policy kind"):
            normalize_spec(PolicySpec("linucb"))

    def test_unknown_param_rejected(self):
        with pytest.raises(ValueError, match="unknown parameter"):
            normalize_spec(PolicySpec("ucb1", {"alpha0": 1.0}))

    def test_optional_tier_not_implemented(self):
        for kind in ("ccb", "ucb_imp", "wls_ots"):
            with pytest.raises(NotImplementedError, match="optional baseline"):
                normalize_spec(PolicySpec(kind))

    def test_window_becomes_integer(self):
        spec = normalize_spec(PolicySpec("sw_ucb", {"window": 50.0}))
        assert spec.params["window"] == 50
        assert isinstance(spec.params["window"], int)

    def test_make_policy_requires_rng_for_random_kinds(self):
        with pytest.raises(ValueError, match="random generator"):
            make_policy(PolicySpec("thompson_beta"), 3)

    def test_out_of_range_params_rejected(self):
        with pytest.raises(ValueError, match="beta0"):
            normalize_spec(PolicySpec("raven_ucb", {"beta0": -1.0}))
        with pytest.raises(ValueError, match="gamma"):
            make_policy(PolicySpec("d_ucb", {"gamma": 1.5}), 2)
        with pytest.raises(ValueError, match="epsilon"):
            make_policy(PolicySpec("epsilon_greedy", {"epsilon": 1.5}), 2,
                        rng=np.random.default_rng(0))
