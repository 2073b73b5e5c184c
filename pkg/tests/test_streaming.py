"""Streaming moment estimation against the two-pass batch oracle."""

import math
import sys

import numpy as np
import pytest

from ravenbandit.streaming import StreamingStats, batch_oracle, mean, update, variance


def stream(values) -> StreamingStats:
    s = StreamingStats()
    for x in values:
        s.update(x)
    return s


def test_single_observation():
    s = stream([5.0])
    assert s.count == 1
    assert s.mean == 5.0
    assert s.variance() == 0.0


def test_constant_sequence():
    s = stream([0.0, 0.0])
    assert s.mean == 0.0
    assert s.variance() == 0.0
    assert stream([0.0, 0.0, 0.0, 0.0]).variance() == 0.0


def test_one_two_three_matches_batch():
    s = stream([1.0, 2.0, 3.0])
    assert s.mean == 2.0
    assert s.variance() == 1.0
    assert batch_oracle([1, 2, 3]) == (2.0, 1.0)


def test_empty_state_conventions():
    s = StreamingStats()
    assert mean(s) == 0.0
    assert variance(s) == 0.0
    assert batch_oracle([]) == (0.0, 0.0)
    assert batch_oracle([7]) == (7.0, 0.0)


def test_functional_update_returns_state():
    s = update(StreamingStats(), 0.8)
    assert (s.count, s.mean) == (1, 0.8)


def test_variance_zero_until_second_observation():
    s = StreamingStats()
    s.update(3.7)
    assert s.variance() == 0.0


@pytest.mark.parametrize("bad", [float("nan"), float("inf"), -float("inf")])
def test_non_finite_rejected(bad):
    with pytest.raises(ValueError, match="invalid observation"):
        StreamingStats().update(bad)
    with pytest.raises(ValueError, match="invalid observation"):
        batch_oracle([1.0, bad])


def test_oracle_equivalence_random_sequences():
    rng = np.random.default_rng(2024)
    for _ in range(60):
        n = int(rng.integers(1, 5000))
        scale = 10.0 ** rng.integers(-3, 7)
        xs = (rng.standard_normal(n) * scale + rng.uniform(-scale, scale)).tolist()
        s = stream(xs)
        bm, bv = batch_oracle(xs)
        assert s.mean == pytest.approx(bm, rel=1e-9, abs=1e-12)
        assert s.variance() == pytest.approx(bv, rel=1e-9, abs=1e-12)


def test_update_forms_agree():
    # m2 += (x - old)(x - new) must match m2 += n/(n+1) * (x - old)^2
    rng = np.random.default_rng(11)
    xs = rng.standard_normal(500) * 3.0
    s = StreamingStats()
    alt_m2, alt_mean = 0.0, 0.0
    for i, x in enumerate(xs):
        s.update(float(x))
        alt_m2 += i / (i + 1) * (x - alt_mean) ** 2
        alt_mean += (x - alt_mean) / (i + 1)
        assert s.m2 == pytest.approx(alt_m2, rel=1e-12, abs=1e-15)


def test_permutation_invariance():
    rng = np.random.default_rng(5)
    xs = rng.uniform(-1e6, 1e6, size=800)
    a = stream(xs.tolist())
    b = stream(xs[rng.permutation(len(xs))].tolist())
    assert a.mean == pytest.approx(b.mean, rel=1e-9)
    assert a.variance() == pytest.approx(b.variance(), rel=1e-9)


def test_shift_stability_large_offset():
    rng = np.random.default_rng(17)
    xs = rng.standard_normal(2000)
    base = stream(xs.tolist()).variance()
    shifted = stream((xs + 1e9).tolist()).variance()
    assert shifted == pytest.approx(base, rel=1e-6)


def test_m2_clamped_nonnegative():
    s = StreamingStats()
    for x in [1e9, 1e9, 1e9 + 1e-7]:
        s.update(x)
    assert s.m2 >= 0.0
    assert s.variance() >= 0.0


def test_state_size_constant():
    # slots=True: no per-instance dict to grow, three scalar fields only
    s = StreamingStats()
    assert not hasattr(s, "__dict__")
    size_before = sys.getsizeof(s)
    for x in range(10000):
        s.update(float(x % 13))
    assert sys.getsizeof(s) == size_before


def test_mean_converges_to_population_value():
    rng = np.random.default_rng(99)
    s = stream(rng.normal(0.25, 1.0, size=200000).tolist())
    assert abs(s.mean - 0.25) < 0.01
    assert abs(s.variance() - 1.0) < 0.02
