"""Bandit policies behind one uniform select/observe interface.

The variance-adaptive UCB policy (``raven_ucb``) scores arms by

    mean + alpha_t * sqrt(ln(t+1) / (N+1)) + beta0 * sqrt(S^2/(N+1) + eps)

with ``alpha_t = alpha0 / ln(t + eps)``, so exploration intensity decays
over time while arms whose rewards have become volatile keep a standing
bonus. Baselines: UCB1, UCB-V, epsilon-greedy, Beta and Gaussian Thompson
sampling, sliding-window UCB, discounted UCB, and a discounted+windowed
Thompson variant that takes the min of the two posterior samples.

All policies share the same initialisation rule: while any active arm is
unpulled, the lowest-index unpulled arm is selected (round-robin over a
static arm set, and newly added arms are picked up immediately). Ties in
any argmax break toward the lowest arm index so that runs are
reproducible without consuming policy randomness.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .streaming import StreamingStats

# floor for the log in the decay coefficient; only reachable for t=1 with
# eps < e-1, which the round-robin phase never exposes
ALPHA_LOG_FLOOR = 1e-6

REQUIRED_KINDS = (
    "raven_ucb",
    "ucb1",
    "ucb_v",
    "epsilon_greedy",
    "thompson_beta",
    "thompson_gaussian",
    "sw_ucb",
    "d_ucb",
    "fdsw_ts_min",
)
OPTIONAL_KINDS = ("ccb", "ucb_imp", "wls_ots")
KNOWN_KINDS = REQUIRED_KINDS + OPTIONAL_KINDS


@dataclass(frozen=True)
class RavenConfig:
    """Hyperparameters of the variance-adaptive UCB policy."""

    alpha0: float = 1.0
    beta0: float = 1.0
    epsilon: float = 0.001

    def __post_init__(self):
        if not self.alpha0 > 0:
            raise ValueError(f"alpha0 must be positive, got {self.alpha0}")
        if self.beta0 < 0:
            raise ValueError(f"beta0 must be nonnegative, got {self.beta0}")
        if not 0 < self.epsilon <= 0.5:
            raise ValueError(f"epsilon must be in (0, 0.5], got {self.epsilon}")


@dataclass(frozen=True)
class PolicySpec:
    """Declarative policy identity: kind plus kind-specific parameters."""

    kind: str
    params: dict = field(default_factory=dict)

    @property
    def name(self) -> str:
        return canonical_name(self)


def decay_coefficient(t: int, cfg: RavenConfig) -> float:
    """Exploration coefficient alpha_t = alpha0 / ln(t + eps), clamped."""
    if t < 1:
        raise ValueError(f"invalid step: {t} (steps start at 1)")
    return cfg.alpha0 / max(math.log(t + cfg.epsilon), ALPHA_LOG_FLOOR)


def raven_score(stats: StreamingStats, t: int, cfg: RavenConfig) -> float:
    """Variance-adaptive upper-confidence score for one arm.

    Natural logs throughout; the uncertainty bonus shrinks like
    1/ln(t + eps) while the variance bonus tracks the arm's current
    sample variance.
    """
    alpha_t = decay_coefficient(t, cfg)
    n1 = stats.count + 1
    explore = alpha_t * math.sqrt(math.log(t + 1) / n1)
    spread = cfg.beta0 * math.sqrt(stats.variance() / n1 + cfg.epsilon)
    return stats.mean + explore + spread


def ucb1_score(stats: StreamingStats, t: int) -> float:
    """Classic UCB1 score: mean + sqrt(2 ln t / N)."""
    if stats.count == 0:
        raise ValueError("ucb1 score undefined for an unpulled arm")
    return stats.mean + math.sqrt(2.0 * math.log(t) / stats.count)


def ucbv_score(stats: StreamingStats, t: int, reward_bound: float = 1.0) -> float:
    """Variance-aware UCB-V score with reward range bound ``reward_bound``."""
    if stats.count == 0:
        raise ValueError("ucb-v score undefined for an unpulled arm")
    n = stats.count
    log_t = math.log(t)
    return stats.mean + math.sqrt(2.0 * stats.variance() * log_t / n) + 3.0 * reward_bound * log_t / n


def _argmax_lowest(candidates, key) -> int:
    """Argmax over an iterable of arm indices, lowest index on ties."""
    best = None
    best_val = -math.inf
    for k in candidates:
        v = key(k)
        if v > best_val:
            best, best_val = k, v
    return best


class Policy:
    """Base class: init rule, bookkeeping, and the observe contract.

    ``t`` always equals one plus the number of observations made, and
    ``counts[k]`` is the number of pulls of arm ``k``. Subclasses
    implement ``_choose`` (post-initialisation selection) and may extend
    ``_update``.
    """

    kind: str = ""

    def __init__(self, n_arms: int, rng: np.random.Generator | None = None):
        if n_arms < 1:
            raise ValueError("n_arms must be at least 1")
        self.n_arms = n_arms
        self.rng = rng
        self.t = 1
        self.counts = [0] * n_arms
        self._last_active: frozenset[int] | None = None

    def select(self, t: int, active) -> int:
        """Choose an arm among ``active`` at step ``t``."""
        if t < 1:
            raise ValueError(f"invalid step: {t} (steps start at 1)")
        act = sorted(active)
        if not act:
            raise ValueError("cannot select from an empty active set")
        if act[0] < 0 or act[-1] >= self.n_arms:
            raise ValueError(f"active set {act} outside arm range [0, {self.n_arms})")
        self._last_active = frozenset(act)
        for k in act:
            if self.counts[k] == 0:
                return k
        return self._choose(t, act)

    def observe(self, arm: int, reward: float) -> None:
        """Record the reward for ``arm`` and advance the step counter."""
        if not 0 <= arm < self.n_arms:
            raise ValueError(f"arm {arm} outside range [0, {self.n_arms})")
        if self._last_active is not None and arm not in self._last_active:
            raise ValueError(f"arm {arm} is not active")
        self.counts[arm] += 1
        self._update(arm, reward)
        self.t += 1

    def _choose(self, t: int, active_sorted: list[int]) -> int:
        raise NotImplementedError

    def _update(self, arm: int, reward: float) -> None:
        raise NotImplementedError


class _MeanVariancePolicy(Policy):
    """Shared per-arm streaming statistics for score-based policies."""

    def __init__(self, n_arms: int):
        super().__init__(n_arms)
        self.stats = [StreamingStats() for _ in range(n_arms)]

    def _update(self, arm, reward):
        self.stats[arm].update(reward)

    def score(self, k: int, t: int) -> float:
        raise NotImplementedError

    def _choose(self, t, active_sorted):
        return _argmax_lowest(active_sorted, lambda k: self.score(k, t))


class RavenUCB(_MeanVariancePolicy):
    kind = "raven_ucb"

    def __init__(self, n_arms: int, config: RavenConfig | None = None):
        super().__init__(n_arms)
        self.config = config or RavenConfig()

    def score(self, k, t):
        return raven_score(self.stats[k], t, self.config)


class UCB1(_MeanVariancePolicy):
    kind = "ucb1"

    def score(self, k, t):
        return ucb1_score(self.stats[k], t)


class UCBV(_MeanVariancePolicy):
    """UCB-V with a configurable reward range bound.

    The bound is exact for Bernoulli rewards (1.0). Gaussian rewards are
    unbounded, so the harness substitutes mu_max + 3*sigma_max from the
    environment's parameter ranges as a working approximation.
    """

    kind = "ucb_v"

    def __init__(self, n_arms: int, reward_bound: float = 1.0):
        super().__init__(n_arms)
        if reward_bound <= 0:
            raise ValueError(f"reward_bound must be positive, got {reward_bound}")
        self.reward_bound = reward_bound

    def score(self, k, t):
        return ucbv_score(self.stats[k], t, self.reward_bound)


class EpsilonGreedy(Policy):
    kind = "epsilon_greedy"

    def __init__(self, n_arms: int, rng: np.random.Generator, epsilon: float = 0.1):
        super().__init__(n_arms, rng)
        if not 0 <= epsilon <= 1:
            raise ValueError(f"epsilon must be in [0, 1], got {epsilon}")
        self.epsilon = epsilon
        self.stats = [StreamingStats() for _ in range(n_arms)]

    def _update(self, arm, reward):
        self.stats[arm].update(reward)

    def _choose(self, t, active_sorted):
        if self.rng.random() < self.epsilon:
            return active_sorted[self.rng.integers(len(active_sorted))]
        return _argmax_lowest(active_sorted, lambda k: self.stats[k].mean)


class ThompsonBeta(Policy):
    """Beta-Bernoulli Thompson sampling; rewards are clipped to [0, 1]."""

    kind = "thompson_beta"

    def __init__(self, n_arms: int, rng: np.random.Generator):
        super().__init__(n_arms, rng)
        self.a = [1.0] * n_arms
        self.b = [1.0] * n_arms

    def _update(self, arm, reward):
        r = min(max(reward, 0.0), 1.0)
        self.a[arm] += r
        self.b[arm] += 1.0 - r

    def _choose(self, t, active_sorted):
        return _argmax_lowest(active_sorted, lambda k: self.rng.beta(self.a[k], self.b[k]))


class ThompsonGaussian(Policy):
    """Gaussian Thompson sampling: N(0, 1) prior, unit observation variance.

    Posterior after n rewards summing to s is N(s/(n+1), 1/(n+1)).
    """

    kind = "thompson_gaussian"

    def __init__(self, n_arms: int, rng: np.random.Generator):
        super().__init__(n_arms, rng)
        self.reward_sum = [0.0] * n_arms

    def _update(self, arm, reward):
        self.reward_sum[arm] += reward

    def _posterior(self, k) -> tuple[float, float]:
        n1 = self.counts[k] + 1
        return self.reward_sum[k] / n1, 1.0 / n1

    def _choose(self, t, active_sorted):
        def sample(k):
            m, v = self._posterior(k)
            return self.rng.normal(m, math.sqrt(v))

        return _argmax_lowest(active_sorted, sample)


class SlidingWindowUCB(Policy):
    """UCB over the most recent ``window`` rewards of each arm.

    Bonus is sqrt(2 ln(min(t, window)) / n_w): the numerator saturates
    once more steps than the window have elapsed, since older evidence
    has been discarded anyway.
    """

    kind = "sw_ucb"

    def __init__(self, n_arms: int, window: int = 100):
        super().__init__(n_arms)
        if window < 1:
            raise ValueError(f"window must be at least 1, got {window}")
        self.window = window
        self.buffers = [deque() for _ in range(n_arms)]
        self.window_sums = [0.0] * n_arms

    def _update(self, arm, reward):
        buf = self.buffers[arm]
        buf.append(reward)
        self.window_sums[arm] += reward
        if len(buf) > self.window:
            self.window_sums[arm] -= buf.popleft()

    def windowed_mean(self, k: int) -> float:
        n = len(self.buffers[k])
        return self.window_sums[k] / n if n else 0.0

    def _choose(self, t, active_sorted):
        log_term = math.log(min(t, self.window)) if min(t, self.window) > 1 else 0.0

        def score(k):
            n = len(self.buffers[k])
            if n == 0:
                return math.inf
            return self.windowed_mean(k) + math.sqrt(2.0 * log_term / n)

        return _argmax_lowest(active_sorted, score)


class DiscountedUCB(Policy):
    """UCB on exponentially discounted reward sums and pull counts.

    With gamma = 1 the discounted statistics equal the raw ones and the
    score reduces to UCB1 with the same constant. An arm whose
    discounted count has decayed to nothing counts as unknown again and
    gets an infinite score.
    """

    kind = "d_ucb"

    _COUNT_FLOOR = 1e-12

    def __init__(self, n_arms: int, gamma: float = 0.95):
        super().__init__(n_arms)
        if not 0 < gamma <= 1:
            raise ValueError(f"gamma must be in (0, 1], got {gamma}")
        self.gamma = gamma
        self.disc_counts = [0.0] * n_arms
        self.disc_sums = [0.0] * n_arms

    def _update(self, arm, reward):
        g = self.gamma
        if g < 1.0:
            for k in range(self.n_arms):
                self.disc_counts[k] *= g
                self.disc_sums[k] *= g
        self.disc_counts[arm] += 1.0
        self.disc_sums[arm] += reward

    def _choose(self, t, active_sorted):
        log_t = math.log(t)

        def score(k):
            n = self.disc_counts[k]
            if n < self._COUNT_FLOOR:
                return math.inf
            return self.disc_sums[k] / n + math.sqrt(2.0 * log_t / n)

        return _argmax_lowest(active_sorted, score)


class FDSWTSMin(Policy):
    """Thompson sampling with both a discounted and a windowed posterior.

    Each arm is scored by the minimum of one sample from its discounted
    posterior and one from its sliding-window posterior, which keeps the
    policy pessimistic about arms whose recent and long-run evidence
    disagree. Beta posteriors (rewards clipped to [0, 1]) for Bernoulli
    environments, Gaussian posteriors otherwise.
    """

    kind = "fdsw_ts_min"

    def __init__(
        self,
        n_arms: int,
        rng: np.random.Generator,
        gamma: float = 0.95,
        window: int = 100,
        family: str = "bernoulli",
    ):
        super().__init__(n_arms, rng)
        if not 0 < gamma <= 1:
            raise ValueError(f"gamma must be in (0, 1], got {gamma}")
        if window < 1:
            raise ValueError(f"window must be at least 1, got {window}")
        if family not in ("bernoulli", "gaussian"):
            raise ValueError(f"unknown reward family: {family!r}")
        self.gamma = gamma
        self.window = window
        self.family = family
        self.disc_counts = [0.0] * n_arms
        self.disc_sums = [0.0] * n_arms
        self.buffers = [deque() for _ in range(n_arms)]
        self.window_sums = [0.0] * n_arms

    def _update(self, arm, reward):
        if self.family == "bernoulli":
            reward = min(max(reward, 0.0), 1.0)
        g = self.gamma
        if g < 1.0:
            for k in range(self.n_arms):
                self.disc_counts[k] *= g
                self.disc_sums[k] *= g
        self.disc_counts[arm] += 1.0
        self.disc_sums[arm] += reward
        buf = self.buffers[arm]
        buf.append(reward)
        self.window_sums[arm] += reward
        if len(buf) > self.window:
            self.window_sums[arm] -= buf.popleft()

    def _sample(self, count: float, total: float) -> float:
        if self.family == "bernoulli":
            successes = min(max(total, 0.0), count)
            return self.rng.beta(1.0 + successes, 1.0 + count - successes)
        n1 = count + 1.0
        return self.rng.normal(total / n1, math.sqrt(1.0 / n1))

    def _choose(self, t, active_sorted):
        def score(k):
            disc = self._sample(self.disc_counts[k], self.disc_sums[k])
            windowed = self._sample(float(len(self.buffers[k])), self.window_sums[k])
            return min(disc, windowed)

        return _argmax_lowest(active_sorted, score)


_PARAM_DEFAULTS: dict[str, dict] = {
    "raven_ucb": {"alpha0": 1.0, "beta0": 1.0, "epsilon": 0.001},
    "ucb1": {},
    "ucb_v": {},  # reward_bound is filled from the environment unless given
    "epsilon_greedy": {"epsilon": 0.1},
    "thompson_beta": {},
    "thompson_gaussian": {},
    "sw_ucb": {"window": 100},
    "d_ucb": {"gamma": 0.95},
    "fdsw_ts_min": {"gamma": 0.95, "window": 100},
}
_OPTIONAL_PARAMS: dict[str, tuple[str, ...]] = {"ucb_v": ("reward_bound",)}


def normalize_spec(spec: PolicySpec) -> PolicySpec:
    """Validate a policy spec and make every default parameter explicit."""
    if spec.kind in OPTIONAL_KINDS:
        raise NotImplementedError(
            f"policy kind {spec.kind!r} is an optional baseline defined in external "
            "work and is not implemented"
        )
    if spec.kind not in _PARAM_DEFAULTS:
        raise ValueError(f"unknown policy kind: {spec.kind!r}")
    defaults = _PARAM_DEFAULTS[spec.kind]
    allowed = set(defaults) | set(_OPTIONAL_PARAMS.get(spec.kind, ()))
    unknown = set(spec.params) - allowed
    if unknown:
        raise ValueError(f"unknown parameter(s) for {spec.kind}: {sorted(unknown)}")
    params = {**defaults, **spec.params}
    for key in ("window",):
        if key in params:
            if params[key] != int(params[key]):
                raise ValueError(f"{key} must be an integer, got {params[key]}")
            params[key] = int(params[key])
    for key, value in params.items():
        if key != "window":
            params[key] = float(value)
    if spec.kind == "raven_ucb":
        RavenConfig(**params)  # range validation
    return PolicySpec(spec.kind, params)


def canonical_name(spec: PolicySpec) -> str:
    """Stable display name and RNG-stream key for a policy spec."""
    norm = normalize_spec(spec)
    if not norm.params:
        return norm.kind
    inner = ",".join(f"{k}={norm.params[k]!r}" for k in sorted(norm.params))
    return f"{norm.kind}[{inner}]"


def make_policy(
    spec: PolicySpec,
    n_arms: int,
    rng: np.random.Generator | None = None,
    family: str = "bernoulli",
    reward_bound: float = 1.0,
) -> Policy:
    """Instantiate fresh per-run policy state for ``spec``.

    ``family`` and ``reward_bound`` describe the environment the policy
    will face; they configure UCB-V's range bound and the posterior
    family of the discounted+windowed Thompson variant.
    """
    norm = normalize_spec(spec)
    kind, p = norm.kind, norm.params
    if kind == "raven_ucb":
        return RavenUCB(n_arms, RavenConfig(**p))
    if kind == "ucb1":
        return UCB1(n_arms)
    if kind == "ucb_v":
        return UCBV(n_arms, reward_bound=p.get("reward_bound", reward_bound))
    if kind == "sw_ucb":
        return SlidingWindowUCB(n_arms, window=p["window"])
    if kind == "d_ucb":
        return DiscountedUCB(n_arms, gamma=p["gamma"])
    if rng is None:
        raise ValueError(f"policy kind {kind!r} needs a random generator")
    if kind == "epsilon_greedy":
        return EpsilonGreedy(n_arms, rng, epsilon=p["epsilon"])
    if kind == "thompson_beta":
        return ThompsonBeta(n_arms, rng)
    if kind == "thompson_gaussian":
        return ThompsonGaussian(n_arms, rng)
    if kind == "fdsw_ts_min":
        return FDSWTSMin(n_arms, rng, gamma=p["gamma"], window=p["window"], family=family)
    raise ValueError(f"unknown policy kind: {kind!r}")
