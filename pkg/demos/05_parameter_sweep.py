"""Grid sweep over (alpha0, beta0) across drift scenarios.

Shows the horizon/scenario dependence of good hyperparameters: small
alpha0 wins short horizons, drifting scenarios reward a larger variance
weight at long horizons.
"""

from ravenbandit import SweepGrid, grid_sweep

grid = SweepGrid(horizons=(1000, 5000))
res = grid_sweep(grid, n_trials=3, master_seed=31, parallel=2)

for scenario in grid.scenarios:
    print(f"\n== {scenario} ==")
    for horizon in grid.horizons:
        best = res.argmin(scenario, horizon)
        print(f"  T={horizon:>5}: best (alpha0={best.alpha0}, beta0={best.beta0}) "
              f"regret {best.mean_regret:.2f}")
        spread = {}
        for beta0 in grid.beta0_values:
            cells = [r.mean_regret for r in res.rows
                     if (r.scenario, r.horizon, r.beta0) == (scenario, horizon, beta0)]
            spread[beta0] = max(cells) - min(cells)
        flattest = min(spread, key=spread.get)
        print(f"           flattest curve across alpha0: beta0={flattest} "
              f"(spread {spread[flattest]:.2f})")
