"""Streaming mean/variance in O(1) state, checked against the batch oracle.

The per-arm accumulator keeps three numbers (count, mean, centered sum of
squares) yet reproduces the full two-pass statistics to near machine
precision, survives values sitting on a huge offset, and costs the same
per update whether it has seen ten observations or a million.
"""

import time

import numpy as np

from ravenbandit import StreamingStats, batch_oracle

rng = np.random.default_rng(7)

print("== streaming vs batch oracle ==")
xs = (rng.standard_normal(100_000) * 3.2 + 41.0).tolist()
s = StreamingStats()
for x in xs:
    s.update(x)
bm, bv = batch_oracle(xs)
print(f"streaming  mean={s.mean:.12f}  variance={s.variance():.12f}")
print(f"two-pass   mean={bm:.12f}  variance={bv:.12f}")
print(f"relative error: mean {abs(s.mean - bm) / abs(bm):.2e}, "
      f"variance {abs(s.variance() - bv) / bv:.2e}")

print("\n== catastrophic-cancellation guard ==")
base = rng.standard_normal(50_000)
plain = StreamingStats()
shifted = StreamingStats()
for x in base:
    plain.update(float(x))
    shifted.update(float(x) + 1e9)
print(f"variance at offset 0:    {plain.variance():.9f}")
print(f"variance at offset 1e9:  {shifted.variance():.9f}")

print("\n== constant cost per update ==")
s = StreamingStats()
for label, n in [("first 10^5", 100_000), ("after 10^6", 1_000_000)]:
    xs = rng.standard_normal(n).tolist()
    t0 = time.perf_counter()
    for x in xs:
        s.update(x)
    per = (time.perf_counter() - t0) / n * 1e6
    print(f"{label}: {per:.3f} us/update (count now {s.count})")
