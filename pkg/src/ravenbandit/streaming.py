"""Single-pass mean/variance estimation with O(1) state per arm.

The accumulator keeps the running mean and the raw centered sum of
squares ``m2``; the unbiased divisor ``count - 1`` is applied only when
the variance is read. Folding the divisor into the accumulator itself
would compound the division across updates, so it never is.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(slots=True)
class StreamingStats:
    """Running count, mean and centered sum of squares for one arm."""

    count: int = 0
    mean: float = 0.0
    m2: float = 0.0

    def update(self, x: float) -> "StreamingStats":
        """Absorb one observation in O(1) time and state.

        Raises ValueError on non-finite input. ``m2`` grows by
        ``(x - mean_old) * (x - mean_new)``, the numerically stable
        product form, and is clamped at zero to absorb round-off.
        """
        if not math.isfinite(x):
            raise ValueError(f"invalid observation: {x!r} is not finite")
        self.count += 1
        delta = x - self.mean
        self.mean += delta / self.count
        self.m2 += delta * (x - self.mean)
        if self.m2 < 0.0:
            self.m2 = 0.0
        return self

    def variance(self) -> float:
        """Unbiased sample variance; 0.0 until two observations exist."""
        if self.count < 2:
            return 0.0
        return self.m2 / (self.count - 1)

    def copy(self) -> "StreamingStats":
        return StreamingStats(self.count, self.mean, self.m2)


def update(state: StreamingStats, x: float) -> StreamingStats:
    """Functional spelling of :meth:`StreamingStats.update`."""
    return state.update(x)


def mean(state: StreamingStats) -> float:
    """Running mean; 0.0 for an empty accumulator."""
    return state.mean


def variance(state: StreamingStats) -> float:
    """Unbiased sample variance; 0.0 for fewer than two observations."""
    return state.variance()


def batch_oracle(xs) -> tuple[float, float]:
    """Two-pass mean and unbiased variance over a full sequence.

    Reference computation for testing the streaming path: the mean is
    computed first, then the centered sum of squares. Returns (0, 0) for
    an empty sequence and variance 0 for a single observation, matching
    the streaming conventions.
    """
    values = [float(x) for x in xs]
    for v in values:
        if not math.isfinite(v):
            raise ValueError(f"invalid observation: {v!r} is not finite")
    n = len(values)
    if n == 0:
        return 0.0, 0.0
    m = math.fsum(values) / n
    if n == 1:
        return m, 0.0
    ss = math.fsum((v - m) ** 2 for v in values)
    return m, ss / (n - 1)
