"""Shared test helpers: a dead-simple independent oracle for the assortment
metrics (pure dict/loop implementation, no shared code with the package) and
small graph constructors."""

from fractions import Fraction

import numpy as np

from cavevote import Graph, PartyAssignment


def naive_neighbors(edges, n_nodes):
    adj = {n: set() for n in range(n_nodes)}
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)
    return adj


def naive_node_assortment(edges, n_nodes, party_of, node, convention):
    """convention: 'dominant' or 'complement'."""
    adj = naive_neighbors(edges, n_nodes)
    poll = [node] + sorted(adj[node])
    tally = {}
    for m in poll:
        tally[party_of[m]] = tally.get(party_of[m], 0) + 1
    size = len(poll)
    own = Fraction(tally[party_of[node]], size)
    best = Fraction(max(tally.values()), size)
    if own == best:
        return own
    if convention == "dominant":
        return -best
    return -(1 - own)


def naive_party_assortment(edges, n_nodes, party_of, party, convention):
    members = [n for n in range(n_nodes) if party_of[n] == party]
    total = sum(naive_node_assortment(edges, n_nodes, party_of, n, convention)
                for n in members)
    return total / len(members)


def naive_influence_gap(edges, n_nodes, party_of, party, convention="dominant"):
    """Gap against the most influential rival (the default gap flavor)."""
    parties = sorted(set(party_of.values()))
    own = naive_party_assortment(edges, n_nodes, party_of, party, convention)
    rival = max(naive_party_assortment(edges, n_nodes, party_of, q, convention)
                for q in parties if q != party)
    return own - rival


def graph_from_edges(n_nodes, edges, labels=None):
    norm = frozenset((u, v) if u < v else (v, u) for u, v in edges)
    return Graph(n_nodes, norm, labels)


def ring_graph(n):
    edges = [(i, (i + 1) % n) for i in range(n)]
    return graph_from_edges(n, edges)


def assignment_from_list(parties, names):
    """names: per-node party name list; parties: full ordered universe."""
    codes = np.array([parties.index(p) for p in names])
    return PartyAssignment(tuple(parties), codes)


def random_small_graph(rng, n_nodes, edge_prob=0.4):
    edges = [(u, v) for u in range(n_nodes) for v in range(u + 1, n_nodes)
             if rng.random() < edge_prob]
    return graph_from_edges(n_nodes, edges)
