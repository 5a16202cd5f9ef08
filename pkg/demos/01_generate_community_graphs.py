# Build caveman-family graphs and see how rewiring and homophily reshape them.

import numpy as np

from cavevote import (HrcParams, assign_parties_spa, build_caveman,
                      generate_hrc, poll_fractions, rewire_relaxed)

# A caveman graph is l isolated cliques of size k.
base = build_caveman(4, 5)
print(f"caveman(4, 5): {base.node_count} nodes, {base.edge_count} edges")
print("clique of node 7:", base.clique_labels[7])

# Place 12 red and 8 blue voters uniformly at random (strong assignment).
assignment = assign_parties_spa(base, {"red": 12, "blue": 8}, seed=42)
print("counts:", assignment.counts())

# Homophilic rewiring: each original edge (u, v) may be redirected to a
# random node n, more eagerly when n shares u's party (h > 0.5) or the
# opposite (h < 0.5).
for h in (0.0, 0.5, 1.0):
    graph, stats = generate_hrc(HrcParams(4, 5, 0.8, h), assignment,
                                seed=7, with_stats=True)
    cross = sum(1 for u, v in graph.edges
                if graph.clique_labels[u] != graph.clique_labels[v])
    print(f"h={h}: rewired {stats.rewired} edges "
          f"({stats.collisions} collided), {cross} cross-community edges")

# Party-blind rewiring is the h = 0.5 special case with p = p0 / 2.
relaxed = rewire_relaxed(base, 0.4, seed=7)
print("relaxed caveman edges still:", relaxed.edge_count)

# Every voter only ever sees its poll: itself plus its neighbors.
graph = generate_hrc(HrcParams(4, 5, 0.8, 0.3), assignment, seed=3)
fractions = poll_fractions(graph, assignment, 0)
print("node 0 sees:", {p: str(f) for p, f in fractions.items()},
      "(exact fractions, sum =", sum(fractions.values()), ")")
