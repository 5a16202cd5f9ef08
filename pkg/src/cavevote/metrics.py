"""Influence assortment / influence gap metrics, caveman closed forms, and the
benchmark election predictors (initial majority, deterministic voter skew,
efficiency gap).

All definition-based metrics are computed in exact rational arithmetic so that
closed-form comparisons are exact rather than tolerance-based.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

import numpy as np

from .graphs import Graph, PartyAssignment


class AssortmentConvention(Enum):
    """How a node not holding local plurality is weighted.

    DOMINANT_NEGATIVE scores it minus the plurality party's poll fraction;
    COMPLEMENT_NEGATIVE scores it minus the combined fraction of all rival
    parties.  With exactly two parties the two coincide.
    """

    DOMINANT_NEGATIVE = "dominant-negative"
    COMPLEMENT_NEGATIVE = "complement-negative"


class GapConvention(Enum):
    """Which rival a party's assortment is compared against.

    VS_MOST_INFLUENTIAL subtracts the strongest rival assortment (always a
    single value); VS_PLURALITY_RUNNER_UP subtracts the assortment of the
    rival(s) with the most voters, which can yield several values on ties.
    """

    VS_MOST_INFLUENTIAL = "vs-most-influential"
    VS_PLURALITY_RUNNER_UP = "vs-plurality-runner-up"


DEFAULT_ASSORTMENT = AssortmentConvention.DOMINANT_NEGATIVE
DEFAULT_GAP = GapConvention.VS_MOST_INFLUENTIAL


def poll_party_counts(graph: Graph, codes, n_parties: "int | None" = None) -> np.ndarray:
    """(N, P) integer matrix: row n counts each party inside n's poll."""
    codes = np.asarray(codes)
    if n_parties is None:
        n_parties = int(codes.max()) + 1
    counts = np.zeros((graph.node_count, n_parties), dtype=np.int64)
    for n in range(graph.node_count):
        counts[n, codes[n]] += 1
        for m in graph.neighbors(n):
            counts[n, codes[m]] += 1
    return counts


def _assortment_from_counts(own: int, mx: int, size: int,
                            conv: AssortmentConvention) -> Fraction:
    if own == mx:  # ties count as holding plurality
        return Fraction(own, size)
    if conv is AssortmentConvention.DOMINANT_NEGATIVE:
        return -Fraction(mx, size)
    return Fraction(own, size) - 1


def node_assortment(graph: Graph, assignment: PartyAssignment, n: int,
                    conv: AssortmentConvention = DEFAULT_ASSORTMENT) -> Fraction:
    """Signed presence of n's own party in its poll, in [-1, 1]."""
    if not 0 <= n < graph.node_count:
        raise ValueError(f"node {n} out of range")
    counts = [0] * assignment.n_parties
    counts[assignment.codes[n]] += 1
    for m in graph.neighbors(n):
        counts[assignment.codes[m]] += 1
    size = graph.degree(n) + 1
    return _assortment_from_counts(counts[assignment.codes[n]], max(counts), size, conv)


def _all_party_assortments(graph: Graph, assignment: PartyAssignment,
                           conv: AssortmentConvention):
    """Per-party mean node assortment (Fractions); None for voterless parties."""
    counts = poll_party_counts(graph, assignment.codes, assignment.n_parties)
    sizes = counts.sum(axis=1)
    mx = counts.max(axis=1)
    sums = [Fraction(0)] * assignment.n_parties
    for n in range(graph.node_count):
        c = assignment.codes[n]
        sums[c] += _assortment_from_counts(int(counts[n, c]), int(mx[n]),
                                           int(sizes[n]), conv)
    binc = np.bincount(assignment.codes, minlength=assignment.n_parties)
    return [s / int(b) if b else None for s, b in zip(sums, binc)]


def party_assortment(graph: Graph, assignment: PartyAssignment, party,
                     conv: AssortmentConvention = DEFAULT_ASSORTMENT) -> Fraction:
    """Mean node assortment over the party's voters."""
    idx = assignment.index_of(party)
    value = _all_party_assortments(graph, assignment, conv)[idx]
    if value is None:
        raise ValueError(f"party {party!r} has no voters")
    return value


def influence_gap(graph: Graph, assignment: PartyAssignment, party,
                  aconv: AssortmentConvention = DEFAULT_ASSORTMENT,
                  gconv: GapConvention = DEFAULT_GAP) -> set:
    """Assortment advantage of ``party`` over a rival.

    Returns a set of values: a singleton under VS_MOST_INFLUENTIAL, possibly
    several values under VS_PLURALITY_RUNNER_UP when rivals tie on votes.
    Only parties with voters can act as the rival.
    """
    idx = assignment.index_of(party)
    assorts = _all_party_assortments(graph, assignment, aconv)
    if assorts[idx] is None:
        raise ValueError(f"party {party!r} has no voters")
    if sum(a is not None for a in assorts) < 2:
        raise ValueError("influence gap needs at least two parties with voters")
    if gconv is GapConvention.VS_MOST_INFLUENTIAL:
        rival = max(a for i, a in enumerate(assorts)
                    if i != idx and a is not None)
        return {assorts[idx] - rival}
    binc = np.bincount(assignment.codes, minlength=assignment.n_parties)
    rival_votes = max(int(b) for i, b in enumerate(binc) if i != idx)
    return {assorts[idx] - assorts[i]
            for i, b in enumerate(binc) if i != idx and int(b) == rival_votes}


def influence_gap_value(graph: Graph, assignment: PartyAssignment, party,
                        aconv: AssortmentConvention = DEFAULT_ASSORTMENT) -> Fraction:
    """The unique gap against the most influential rival."""
    (value,) = influence_gap(graph, assignment, party, aconv,
                             GapConvention.VS_MOST_INFLUENTIAL)
    return value


@dataclass(frozen=True)
class CliqueCounts:
    """Own-party head counts per clique of an isolated-cliques graph.

    Cliques are kept in descending count order; ``strict_majorities`` counts
    cliques the party strictly dominates, ``weak_majorities`` adds exact ties.
    """

    own_counts: tuple
    clique_size: int

    def __post_init__(self):
        counts = tuple(sorted((int(x) for x in self.own_counts), reverse=True))
        object.__setattr__(self, "own_counts", counts)
        if self.clique_size < 1:
            raise ValueError("clique_size must be positive")
        if any(x < 0 or x > self.clique_size for x in counts):
            raise ValueError("counts must lie in [0, clique_size]")

    @classmethod
    def from_assignment(cls, graph: Graph, assignment: PartyAssignment, party):
        if graph.clique_labels is None:
            raise ValueError("graph carries no clique labels")
        idx = assignment.index_of(party)
        labels = np.asarray(graph.clique_labels)
        l = int(labels.max()) + 1
        own = [int(np.sum((labels == c) & (assignment.codes == idx))) for c in range(l)]
        return cls(tuple(own), graph.node_count // l)

    @property
    def clique_count(self) -> int:
        return len(self.own_counts)

    @property
    def total(self) -> int:
        return sum(self.own_counts)

    @property
    def strict_majorities(self) -> int:
        return sum(1 for x in self.own_counts if 2 * x > self.clique_size)

    @property
    def weak_majorities(self) -> int:
        return sum(1 for x in self.own_counts if 2 * x >= self.clique_size)

    @property
    def marginal(self) -> int:
        return self.weak_majorities - self.strict_majorities

    def prefix_sum(self, d: int) -> int:
        return sum(self.own_counts[:d])


def caveman_assortment_closed(counts: CliqueCounts, n_own: int, n_other: int) -> Fraction:
    """Closed-form party assortment on isolated cliques, from the party's own
    per-clique counts: (sum x_c^2/k + X_{M'}) / N_own - 1."""
    if counts.total != n_own:
        raise ValueError("clique counts do not sum to n_own")
    if n_own + n_other != counts.clique_count * counts.clique_size:
        raise ValueError("party totals do not cover the graph")
    k = counts.clique_size
    sq = sum(Fraction(x * x, k) for x in counts.own_counts)
    return (sq + counts.prefix_sum(counts.weak_majorities)) / n_own - 1


def caveman_rival_assortment_closed(counts: CliqueCounts, n_own: int,
                                    n_other: int) -> Fraction:
    """Closed-form assortment of the *other* party in a two-party caveman
    graph, expressed through this party's counts:
    (sum x_c^2/k + X_M + N - 2 N_own - M k) / N_other."""
    if counts.total != n_own:
        raise ValueError("clique counts do not sum to n_own")
    n_total = counts.clique_count * counts.clique_size
    if n_own + n_other != n_total:
        raise ValueError("party totals do not cover the graph")
    if n_other <= 0:
        raise ValueError("rival party must have voters")
    k = counts.clique_size
    m = counts.strict_majorities
    sq = sum(Fraction(x * x, k) for x in counts.own_counts)
    return (sq + counts.prefix_sum(m) + n_total - 2 * n_own - m * k) / n_other


def caveman_gap_closed(counts: CliqueCounts, n_own: int, n_other: int) -> Fraction:
    """Two-party influence gap on isolated cliques, as the difference of the
    two closed-form assortments.

    The single-expression form sometimes quoted for this quantity carries a
    sign slip on its (N_other - N_own) term; taking the difference of the two
    assortment formulas avoids it (checked against brute force in the tests).
    """
    a_own = caveman_assortment_closed(counts, n_own, n_other)
    a_other = caveman_rival_assortment_closed(counts, n_own, n_other)
    return a_own - a_other


def equal_rep_gap(strict: int, weak: int, l: int) -> Fraction:
    """Two-party caveman gap under equal representation: (M + M')/l - 1."""
    if strict > weak:
        raise ValueError("strict majority count cannot exceed weak count")
    if weak > l:
        raise ValueError("weak majority count cannot exceed clique count")
    return Fraction(strict + weak, l) - 1


def clique_gap(n: int, n0: int, winners: int, is_winner: bool) -> Fraction:
    """Influence gap inside a single clique with ``winners`` joint plurality
    parties of ``n0`` voters each: +-2*n0/n by winning side."""
    if winners * n0 > n:
        raise ValueError("winning blocs cannot exceed the clique size")
    g = Fraction(2 * n0, n)
    return g if is_winner else -g


def plurality_core_gap(n0: int, winners: int, is_winner: bool) -> Fraction:
    """Influence gap of a plurality-core graph (winners fully connected,
    periphery seeing only them): +-2*n0/(winners*n0 + 1).

    This is the small-graph approximation quoted for such cores; the
    definition-based value differs at small sizes (see tests).
    """
    if n0 < 1 or winners < 1:
        raise ValueError("need n0 >= 1 and winners >= 1")
    g = Fraction(2 * n0, winners * n0 + 1)
    return g if is_winner else -g


def initial_majority(assignment: PartyAssignment, party):
    """Two parties: voter count above parity (N_P - N/2); otherwise the raw
    voter count of the party."""
    counts = assignment.counts()
    if assignment.n_parties == 2:
        return Fraction(counts[party]) - Fraction(assignment.node_count, 2)
    return counts[party]


def _conformity_step(graph: Graph, codes: np.ndarray, n_parties: int) -> np.ndarray:
    """One synchronous round: adopt the strict plurality party of the poll,
    keep the current party on a tie."""
    counts = poll_party_counts(graph, codes, n_parties)
    new = codes.copy()
    top = counts.max(axis=1)
    n_top = (counts == top[:, None]).sum(axis=1)
    unique = n_top == 1
    new[unique] = counts[unique].argmax(axis=1)
    return new


def deterministic_vote_shares(graph: Graph, assignment: PartyAssignment,
                              steps: int = 1) -> dict:
    """Per-party vote shares after ``steps`` majority-conformity rounds."""
    if steps < 1:
        raise ValueError("steps must be >= 1")
    codes = assignment.codes.copy()
    for _ in range(steps):
        codes = _conformity_step(graph, codes, assignment.n_parties)
    binc = np.bincount(codes, minlength=assignment.n_parties)
    return {p: Fraction(int(b), graph.node_count)
            for p, b in zip(assignment.parties, binc)}


def deterministic_voter_skew(graph: Graph, assignment: PartyAssignment, party,
                             steps: int = 1) -> Fraction:
    """Party share minus 1/2 after the majority-conformity rounds."""
    shares = deterministic_vote_shares(graph, assignment, steps)
    return shares[party] - Fraction(1, 2)


def efficiency_gap(graph: Graph, assignment: PartyAssignment, party) -> Fraction:
    """Wasted-vote imbalance across the original cliques (two parties only).

    In each district the loser wastes every vote and the winner wastes votes
    beyond floor(k/2)+1; a tied district wastes all votes on both sides.
    """
    if assignment.n_parties != 2:
        raise ValueError("efficiency gap is defined for exactly two parties")
    if graph.clique_labels is None:
        raise ValueError("graph carries no district (clique) labels")
    idx = assignment.index_of(party)
    labels = np.asarray(graph.clique_labels)
    wasted = [0, 0]
    for c in range(int(labels.max()) + 1):
        members = assignment.codes[labels == c]
        k = len(members)
        votes = [int(np.sum(members == i)) for i in (0, 1)]
        needed = k // 2 + 1
        if votes[0] == votes[1]:
            wasted[0] += votes[0]
            wasted[1] += votes[1]
        else:
            win = 0 if votes[0] > votes[1] else 1
            wasted[win] += votes[win] - needed
            wasted[1 - win] += votes[1 - win]
    return Fraction(wasted[1 - idx] - wasted[idx], graph.node_count)


@dataclass(frozen=True)
class MetricReport:
    """Snapshot of all start-of-election predictors for one graph."""

    parties: tuple
    gaps: dict                 # party -> Fraction (default conventions)
    majority: "Fraction | None"  # two-party count above parity
    voter_skew: "Fraction | None"
    efficiency: "Fraction | None"
    assortment_convention: AssortmentConvention = DEFAULT_ASSORTMENT
    gap_convention: GapConvention = DEFAULT_GAP


def metric_report(graph: Graph, assignment: PartyAssignment,
                  aconv: AssortmentConvention = DEFAULT_ASSORTMENT,
                  reference_party=None) -> MetricReport:
    """Compute the full predictor set; two-party-only metrics are None when
    more than two parties are present."""
    ref = reference_party if reference_party is not None else assignment.parties[0]
    gaps = {p: influence_gap_value(graph, assignment, p, aconv)
            for p in assignment.parties}
    two = assignment.n_parties == 2
    return MetricReport(
        parties=assignment.parties,
        gaps=gaps,
        majority=initial_majority(assignment, ref) if two else None,
        voter_skew=deterministic_voter_skew(graph, assignment, ref) if two else None,
        efficiency=efficiency_gap(graph, assignment, ref)
        if two and graph.clique_labels is not None else None,
        assortment_convention=aconv,
    )
