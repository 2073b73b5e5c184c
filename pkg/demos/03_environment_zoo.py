"""Tour of the non-stationary scenario presets.

Every preset's true-parameter trajectory is a pure function of the trial
seed; here we roll each one forward and report what actually moved.
"""

import numpy as np

from ravenbandit import PRESETS, preset, simulate_trajectory
from ravenbandit.harness import trial_seed

seed = trial_seed(2024, 0)

for name in PRESETS:
    spec = preset(name)
    horizon = min(spec.horizon, 6000)
    mu, sigma2, active, resets = simulate_trajectory(spec, horizon, seed)
    moved = int(np.sum(np.any(mu != mu[0], axis=0)))
    arm_churn = int(np.sum(np.any(active != active[0], axis=0)))
    best_path = np.argmax(np.where(active, mu, -np.inf), axis=1)
    switches = int(np.sum(best_path[1:] != best_path[:-1]))
    print(f"{name:>16}: k={spec.k:<3} family={spec.family:<9} "
          f"arms with moving means: {moved:<3} arm set changes: {arm_churn:<2} "
          f"oracle switches: {switches:<3} resets: {len(resets)}")

print("\nlogistics-desk reset detail (first three):")
spec = preset("logistics-desk")
_, _, _, resets = simulate_trajectory(spec, spec.horizon, seed)
for t in sorted(resets)[:3]:
    print(f"  t={t}: redrew arms {resets[t]}")
