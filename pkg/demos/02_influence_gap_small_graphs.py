# The influence-gap metric family on small worked examples, two- and
# three-party, under every convention.

import numpy as np

from cavevote import (AssortmentConvention, CliqueCounts, GapConvention,
                      PartyAssignment, build_caveman, caveman_gap_closed,
                      clique_gap, complete_graph, equal_rep_gap,
                      influence_gap, line_graph, node_assortment,
                      party_assortment, plurality_core_gap, star_graph)

DOM = AssortmentConvention.DOMINANT_NEGATIVE
COMP = AssortmentConvention.COMPLEMENT_NEGATIVE
RUNNER_UP = GapConvention.VS_PLURALITY_RUNNER_UP


def assign(parties, names):
    return PartyAssignment(tuple(parties),
                           np.array([parties.index(p) for p in names]))


# --- Two parties on three 4-cliques -----------------------------------------
# One clique is all red; the other two hold a single red voter each.  Red has
# the same number of voters as blue but is locked into one community.
g = build_caveman(3, 4)
a = assign(["red", "blue"],
           ["red"] * 4 + ["red", "blue", "blue", "blue"] * 2)
print("assortments:",
      {p: str(party_assortment(g, a, p)) for p in ("red", "blue")})
print("influence gap of red:", influence_gap(g, a, "red"))  # {-1/3}

# The same number drops out of the closed form driven only by per-clique
# head counts, with no graph in sight:
counts = CliqueCounts((4, 1, 1), clique_size=4)
print("closed form:", caveman_gap_closed(counts, 6, 6))
print("equal-representation shortcut:",
      equal_rep_gap(counts.strict_majorities, counts.weak_majorities, 3))

# --- Three parties: conventions start to matter ------------------------------
parties = ["circle", "triangle", "square"]
star = star_graph(3)
center_triangle = assign(parties, ["triangle", "circle", "circle", "square"])
print("\nstar with a triangle center:")
print("  center assortment, dominant-negative:",
      node_assortment(star, center_triangle, 0, DOM))        # -1/2
print("  center assortment, complement-negative:",
      node_assortment(star, center_triangle, 0, COMP))       # -3/4
print("  triangle gap:",
      influence_gap(star, center_triangle, "triangle", DOM),
      "vs", influence_gap(star, center_triangle, "triangle", COMP))

# The runner-up gap flavor can be multi-valued when rivals tie on votes:
line = line_graph(3)
three_line = assign(parties, parties)
print("\nline circle-triangle-square, runner-up flavor:")
print("  circle gap values:",
      influence_gap(line, three_line, "circle", DOM, RUNNER_UP))

# --- Cliques and plurality cores ---------------------------------------------
# Inside one community the gap collapses to +-2 * winners / size.
ten = complete_graph(10)
mixed = assign(parties, ["circle"] * 4 + ["triangle"] * 3 + ["square"] * 3)
print("\n10-clique with a 4-voter winner:",
      influence_gap(ten, mixed, "circle"), "== formula",
      clique_gap(10, 4, 1, True))
print("plurality-core approximation for the same winner bloc:",
      plurality_core_gap(4, 1, True))
