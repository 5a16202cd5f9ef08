# Which start-of-game metric best predicts the final outcome?  A desk-scale
# sweep, per-cell correlations, and the three regression models.

import numpy as np

from cavevote import SweepConfig, ols_fit, pcc_curves, run_batch

# 200 elections per cell keeps this demo quick; the acceptance suite runs
# the same analysis at 2000.
config = SweepConfig(master_seed=99, p0_grid=(0.0, 0.4, 1.0),
                     h_grid=(0.0, 0.3, 0.6, 0.9), elections_per_cell=200,
                     red_min=10, red_max=16)
records = list(run_batch(config, workers=2))
print(f"simulated {len(records)} elections")

points = pcc_curves(records, metrics=("majority", "ig", "dvs", "eg"))
print("\nPCC with the final red skew, by cell:")
print("p0   h    majority   gap    dvs     eg")
cells = {}
for p in points:
    cells.setdefault((p.p0, p.h), {})[p.metric] = p.value
for (p0, h), vals in sorted(cells.items()):
    print(f"{p0:3.1f} {h:4.1f}   "
          + "  ".join(f"{vals[m]:+.3f}" for m in ("majority", "ig", "dvs", "eg")))

majority = np.array([r.majority for r in records])
gap = np.array([r.gaps["red"] for r in records])
skew = np.array([r.final_skews["red"] for r in records])
fits = {
    "majority only": ols_fit(majority, skew, 0.7, seed=1),
    "gap only": ols_fit(gap, skew, 0.7, seed=1),
    "joint": ols_fit(np.column_stack([majority, gap]), skew, 0.7, seed=1),
}
print("\nheld-out R^2 of the skew models:")
for name, fit in fits.items():
    print(f"  {name:14s} {fit.r_squared:.3f}  (coefficients "
          f"{[round(c, 4) for c in fit.coefficients]}, "
          f"intercept {fit.intercept:.4f})")
print("\nCounting votes beats placing them; combining both does best.")
