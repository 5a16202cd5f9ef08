# Run one stochastic election and watch the vote shares move tick by tick.

import numpy as np

from cavevote import (BehaviorDistribution, ElectionConfig, HrcParams,
                      assign_parties_spa, build_caveman, generate_hrc,
                      metric_report, run_election, sample_strategies)

rng = np.random.default_rng(20)

base = build_caveman(4, 5)
assignment = assign_parties_spa(base, {"red": 12, "blue": 8}, rng)
graph = generate_hrc(HrcParams(4, 5, 0.3, 0.3), assignment, rng)

# Start-of-game predictors.
report = metric_report(graph, assignment)
print("initial majority:", report.majority)
print("influence gap (red):", report.gaps["red"])
print("deterministic voter skew:", report.voter_skew)
print("efficiency gap:", report.efficiency)

# Each voter gets six personal stick-probabilities, one per (predicted
# outcome, game phase) pair, drawn around the measured behavioral means.
strategies = sample_strategies(BehaviorDistribution(), 20, rng)
print("\nvoter 0 stick table (win/deadlock/lose x early/late):")
print(np.round(strategies.values[0], 3))

config = ElectionConfig()  # 240 s, early phase to 83 s, tick 3.3 s, V = 0.6
outcome = run_election(graph, assignment, config, strategies, rng)

print(f"\n{config.n_ticks} ticks; winner: {outcome.winner or 'deadlock'}")
print("final shares:", outcome.final_shares)
for tick in range(0, config.n_ticks + 1, 12):
    red = outcome.trajectory[tick, 0]
    bar = "#" * int(red * 40)
    print(f"  t={tick * config.tick_s:6.1f}s red share {red:.2f} {bar}")
