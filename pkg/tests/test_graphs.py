"""Generator behavior: caveman construction, strong party assignment, and the
homophilic rewiring pass."""

from fractions import Fraction

import numpy as np
import pytest

from cavevote import (HrcParams, assign_parties_spa, build_caveman,
                      generate_hrc, poll_fractions, rewire_relaxed)
from cavevote.graphs import Graph

from util import assignment_from_list, graph_from_edges


def components(graph):
    seen = set()
    count = 0
    for start in range(graph.node_count):
        if start in seen:
            continue
        count += 1
        stack = [start]
        while stack:
            n = stack.pop()
            if n in seen:
                continue
            seen.add(n)
            stack.extend(graph.neighbors(n))
    return count


def spa(graph, counts, seed=0):
    return assign_parties_spa(graph, counts, seed)


class TestCaveman:
    def test_three_by_four(self):
        g = build_caveman(3, 4)
        assert g.node_count == 12
        assert g.edge_count == 18
        assert components(g) == 3
        assert g.clique_labels == (0, 0, 0, 0, 1, 1, 1, 1, 2, 2, 2, 2)

    def test_single_clique_is_complete(self):
        g = build_caveman(1, 5)
        assert g.edge_count == 10
        assert all(g.degree(n) == 4 for n in range(5))

    def test_degenerate_cliques(self):
        g = build_caveman(2, 1)
        assert g.node_count == 2
        assert g.edge_count == 0

    @pytest.mark.parametrize("l,k", [(0, 3), (3, 0), (0, 0)])
    def test_rejects_empty_shapes(self, l, k):
        with pytest.raises(ValueError):
            build_caveman(l, k)

    def test_graph_invariants_enforced(self):
        with pytest.raises(ValueError):
            Graph(3, frozenset({(1, 1)}))
        with pytest.raises(ValueError):
            Graph(3, frozenset({(0, 3)}))


class TestSpa:
    def test_exact_counts(self):
        g = build_caveman(3, 4)
        a = spa(g, {"red": 6, "blue": 6})
        assert a.counts() == {"red": 6, "blue": 6}

    def test_single_party(self):
        g = build_caveman(3, 4)
        a = spa(g, {"red": 12})
        assert all(a.party_of(n) == "red" for n in range(12))

    def test_three_party(self):
        g = build_caveman(4, 5)
        a = spa(g, {"red": 10, "blue": 5, "green": 5})
        assert a.counts() == {"red": 10, "blue": 5, "green": 5}
        assert a.parties == ("red", "blue", "green")

    def test_bad_counts(self):
        g = build_caveman(3, 4)
        with pytest.raises(ValueError):
            spa(g, {"red": 5, "blue": 6})
        with pytest.raises(ValueError):
            spa(g, {"red": 12, "blue": 0})

    def test_seeded_determinism(self):
        g = build_caveman(4, 5)
        a = spa(g, {"red": 12, "blue": 8}, seed=123)
        b = spa(g, {"red": 12, "blue": 8}, seed=123)
        assert np.array_equal(a.codes, b.codes)


class TestHrcGenerator:
    def test_zero_rewire_is_identity(self):
        g = build_caveman(4, 5)
        a = spa(g, {"red": 10, "blue": 10}, seed=7)
        for h in (0.0, 0.3, 1.0):
            out = generate_hrc(HrcParams(4, 5, 0.0, h), a, seed=99)
            assert out.edges == g.edges

    def test_full_homophily_pure_cliques_is_identity(self):
        # two cliques, one all red and one all blue: with p0=1, h=1 every
        # same-party target lies inside the rewiring node's own clique, so
        # every attempt collides and nothing changes
        g = build_caveman(2, 4)
        a = assignment_from_list(["red", "blue"], ["red"] * 4 + ["blue"] * 4)
        for seed in range(25):
            out = generate_hrc(HrcParams(2, 4, 1.0, 1.0), a, seed=seed)
            assert out.edges == g.edges

    def test_attempt_rate_is_half_when_balanced(self):
        # p0=1, h=0.5 gives every edge a 0.5 chance to attempt a rewire
        g = build_caveman(2, 5)
        a = spa(g, {"red": 5, "blue": 5}, seed=1)
        attempts = 0
        n_graphs = 2000
        for seed in range(n_graphs):
            _, stats = generate_hrc(HrcParams(2, 5, 1.0, 0.5), a, seed,
                                    with_stats=True)
            attempts += stats.attempts
        total_edges = n_graphs * g.edge_count
        rate = attempts / total_edges
        se = 0.5 / np.sqrt(total_edges)
        assert abs(rate - 0.5) < 4 * se

    def test_added_edges_always_cross_clique(self):
        base = build_caveman(3, 4)
        a = spa(base, {"red": 6, "blue": 6}, seed=3)
        for seed in range(200):
            out, stats = generate_hrc(HrcParams(3, 4, 1.0, 0.2), a, seed,
                                      with_stats=True)
            added = out.edges - base.edges
            assert added == set(stats.added_edges)
            for u, v in added:
                assert u // 4 != v // 4

    def test_edge_count_and_collision_accounting(self):
        # a collided rewire leaves the graph unchanged, so the edge count
        # stays at l*k*(k-1)/2 and attempts split into rewired + collided
        a = spa(build_caveman(3, 4), {"red": 6, "blue": 6}, seed=3)
        for seed in range(100):
            out, stats = generate_hrc(HrcParams(3, 4, 0.9, 0.5), a, seed,
                                      with_stats=True)
            assert out.edge_count == 18
            assert stats.attempts == stats.rewired + stats.collisions

    def test_determinism(self):
        a = spa(build_caveman(4, 5), {"red": 12, "blue": 8}, seed=5)
        p = HrcParams(4, 5, 0.7, 0.3)
        assert generate_hrc(p, a, seed=42).edges == generate_hrc(p, a, seed=42).edges

    def test_node_count_preserved(self):
        a = spa(build_caveman(5, 4), {"red": 10, "blue": 10}, seed=5)
        out = generate_hrc(HrcParams(5, 4, 1.0, 0.1), a, seed=8)
        assert out.node_count == 20
        assert out.clique_labels == tuple(n // 4 for n in range(20))

    def test_assignment_size_mismatch(self):
        a = spa(build_caveman(3, 4), {"red": 6, "blue": 6}, seed=0)
        with pytest.raises(ValueError):
            generate_hrc(HrcParams(4, 4, 0.5, 0.5), a, seed=0)

    def test_param_validation(self):
        with pytest.raises(ValueError):
            HrcParams(3, 4, 1.5, 0.5)
        with pytest.raises(ValueError):
            HrcParams(3, 4, 0.5, -0.1)
        with pytest.raises(ValueError):
            HrcParams(0, 4, 0.5, 0.5)


class TestRelaxedRewire:
    def test_zero_probability_is_identity(self):
        g = build_caveman(3, 4)
        assert rewire_relaxed(g, 0.0, seed=1).edges == g.edges

    def test_probability_out_of_range(self):
        g = build_caveman(3, 4)
        with pytest.raises(ValueError):
            rewire_relaxed(g, 1.2, seed=1)

    def test_requires_caveman_input(self):
        g = build_caveman(2, 3)
        rewired = rewire_relaxed(g, 1.0, seed=3)
        if rewired.edges != g.edges:
            with pytest.raises(ValueError):
                rewire_relaxed(rewired, 0.5, seed=1)

    def test_p1_on_2x2_new_edges_cross_cliques(self):
        g = build_caveman(2, 2)
        for seed in range(100):
            out = rewire_relaxed(g, 1.0, seed)
            for u, v in out.edges - g.edges:
                assert u // 2 != v // 2

    def test_matches_hrc_with_half_homophily_bitwise(self):
        # p-tilde is p0*h = p on every edge, and the draw order is shared, so
        # the party-blind pass and the h=0.5 homophilic pass coincide exactly
        g = build_caveman(3, 4)
        a = spa(g, {"red": 6, "blue": 6}, seed=11)
        for p in (0.15, 0.4):
            for seed in range(30):
                blind = rewire_relaxed(g, p, seed)
                homo = generate_hrc(HrcParams(3, 4, 2 * p, 0.5), a, seed)
                assert blind.edges == homo.edges


class TestPollFractions:
    def test_middle_of_line(self):
        g = graph_from_edges(3, [(0, 1), (1, 2)])
        a = assignment_from_list(["circle", "triangle", "square"],
                                 ["circle", "triangle", "square"])
        fr = poll_fractions(g, a, 1)
        assert fr == {"circle": Fraction(1, 3), "triangle": Fraction(1, 3),
                      "square": Fraction(1, 3)}

    def test_isolated_node(self):
        g = build_caveman(2, 1)
        a = assignment_from_list(["red", "blue"], ["red", "blue"])
        assert poll_fractions(g, a, 0)["red"] == 1

    def test_mixed_four_clique(self):
        g = build_caveman(1, 4)
        a = assignment_from_list(["circle", "triangle", "square"],
                                 ["circle", "circle", "triangle", "square"])
        for n in range(4):
            fr = poll_fractions(g, a, n)
            assert fr["circle"] == Fraction(1, 2)
            assert fr["triangle"] == Fraction(1, 4)
            assert fr["square"] == Fraction(1, 4)

    def test_sums_to_one_on_generated_graphs(self):
        rng = np.random.default_rng(0)
        for trial in range(20):
            l, k = int(rng.integers(2, 5)), int(rng.integers(2, 6))
            base = build_caveman(l, k)
            n = l * k
            red = int(rng.integers(1, n))
            a = assign_parties_spa(base, {"red": red, "blue": n - red}, rng)
            g = generate_hrc(HrcParams(l, k, float(rng.random()),
                                       float(rng.random())), a, rng)
            for node in range(n):
                assert sum(poll_fractions(g, a, node).values()) == 1

    def test_out_of_range_node(self):
        g = build_caveman(2, 2)
        a = assignment_from_list(["red", "blue"], ["red", "red", "blue", "blue"])
        with pytest.raises(ValueError):
            poll_fractions(g, a, 4)
