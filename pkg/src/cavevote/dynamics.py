"""Stochastic voter-model elections with state- and phase-dependent
stick-probabilities, for two or more parties.

Voters observe only their poll (self plus neighbors).  Each tick every voter
classifies its situation as winning, deadlocked or losing, then keeps its
current vote with the personal probability attached to that (state, phase)
pair, or else defects to the strongest rival party in its poll.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import IntEnum

import numpy as np

from .graphs import Graph, PartyAssignment, make_rng


class PollState(IntEnum):
    WIN = 0
    DEADLOCK = 1
    LOSE = 2


class Phase(IntEnum):
    EARLY = 0
    LATE = 1


# Mean stick-probabilities by (state, phase), measured in the social
# experiment behind the behavioral model: rows WIN/DEADLOCK/LOSE, cols
# EARLY/LATE.
DEFAULT_MEAN_STICK = np.array([
    [0.975, 0.979],
    [0.964, 0.911],
    [0.598, 0.574],
])

# Concentration of the Beta surrogate around those means.  Chosen so that
# winning-state draws are heavily biased above 0.9 while losing-state draws
# stay broadly spread.
DEFAULT_CONCENTRATION = 16.0

# How the stick-probability is anchored: to the voter's originally assigned
# party, or to whatever they currently vote.  Anchoring to the assignment is
# the default; it reproduces the strong majority/outcome coupling that the
# behavioral model is known for, while current-vote anchoring is kept as a
# selectable variant.
STICK_MODES = ("assigned", "current")
DEFAULT_STICK_MODE = "assigned"


@dataclass(frozen=True)
class BehaviorDistribution:
    """Distribution that voter strategies are drawn from.

    Without empirical samples, each stick-probability is drawn from a Beta
    distribution with the given mean and concentration (shape parameters
    mean*concentration and (1-mean)*concentration).  ``empirical`` maps
    (PollState, Phase) to a 1-D sample array drawn from uniformly instead.
    """

    means: np.ndarray = field(default_factory=lambda: DEFAULT_MEAN_STICK.copy())
    concentration: float = DEFAULT_CONCENTRATION
    empirical: "dict | None" = None

    def __post_init__(self):
        means = np.asarray(self.means, dtype=float)
        object.__setattr__(self, "means", means)
        if means.shape != (3, 2):
            raise ValueError("means must be a 3x2 (state x phase) table")
        if np.any(means <= 0.0) or np.any(means >= 1.0):
            raise ValueError("mean stick-probabilities must lie in (0, 1)")
        if self.concentration <= 0.0:
            raise ValueError("concentration must be positive")


@dataclass(frozen=True)
class StrategyMatrix:
    """Per-voter stick-probabilities, shape (voters, 3 states, 2 phases)."""

    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "values", values)
        if values.ndim != 3 or values.shape[1:] != (3, 2):
            raise ValueError("values must have shape (voters, 3, 2)")
        if np.any(values < 0.0) or np.any(values > 1.0):
            raise ValueError("stick-probabilities must lie in [0, 1]")

    @property
    def n_voters(self) -> int:
        return self.values.shape[0]

    @classmethod
    def constant(cls, n_voters: int, p: float) -> "StrategyMatrix":
        return cls(np.full((n_voters, 3, 2), float(p)))


def sample_strategies(dist: BehaviorDistribution, n_voters: int, seed) -> StrategyMatrix:
    """Draw one (state, phase) stick-probability table per voter."""
    rng = make_rng(seed)
    values = np.empty((n_voters, 3, 2))
    for state in PollState:
        for phase in Phase:
            if dist.empirical is not None and (state, phase) in dist.empirical:
                pool = np.asarray(dist.empirical[(state, phase)], dtype=float)
                picks = rng.integers(len(pool), size=n_voters)
                values[:, state, phase] = pool[picks]
            else:
                mu = dist.means[state, phase]
                a = mu * dist.concentration
                b = (1.0 - mu) * dist.concentration
                values[:, state, phase] = rng.beta(a, b, size=n_voters)
    return StrategyMatrix(values)


@dataclass(frozen=True)
class ElectionConfig:
    """Timing and victory parameters of one election."""

    duration_s: float = 240.0
    early_cutoff_s: float = 83.0
    tick_s: float = 3.3
    victory_threshold: float = 0.6

    def __post_init__(self):
        if not 0.5 < self.victory_threshold <= 1.0:
            raise ValueError("victory threshold must lie in (0.5, 1]")
        if not 0.0 < self.early_cutoff_s < self.duration_s:
            raise ValueError("early cutoff must lie inside the duration")
        if self.tick_s <= 0.0:
            raise ValueError("tick interval must be positive")

    @property
    def n_ticks(self) -> int:
        return int(self.duration_s / self.tick_s)

    def phase_of_tick(self, tick: int) -> Phase:
        """Phase of tick r (1-based), which fires at t = tick_s * r."""
        return Phase.EARLY if self.tick_s * tick < self.early_cutoff_s else Phase.LATE

    @property
    def phases(self) -> tuple:
        return tuple(self.phase_of_tick(r) for r in range(1, self.n_ticks + 1))


def classify_poll_state(delta_own: float, victory_threshold: float) -> PollState:
    """WIN at or above the threshold, LOSE strictly below its complement,
    DEADLOCK in between.

    Winning is inclusive, mirroring how a weak plurality already counts as
    positive assortment; losing is exclusive (a poll sitting exactly at 1-V
    is still a deadlock).  This asymmetry matters on small polls, where
    boundary fractions are common, and is what keeps per-community majorities
    sticky instead of self-dissolving.
    """
    if not 0.5 < victory_threshold <= 1.0:
        raise ValueError("victory threshold must lie in (0.5, 1]")
    if delta_own >= victory_threshold:
        return PollState.WIN
    if delta_own < 1.0 - victory_threshold:
        return PollState.LOSE
    return PollState.DEADLOCK


def _step_many(poll, sizes, votes, anchors, strategies, phase,
               victory_threshold, draws, n_parties):
    """Vectorized synchronous update over a batch of elections.

    poll: (B, N, N) uint8; sizes: (B, N); votes: (B, N) int;
    anchors: (B, N) party each voter's stick-probability protects (their
    assigned party, or ``votes`` itself for current-vote anchoring);
    strategies: (B, N, 3, 2); draws: (B, 2, N) uniforms (stick row, tie row).
    All reads use the pre-step vote vector.
    """
    counts = poll_counts_parties(poll, votes, n_parties)  # (B, N, P)

    own = np.take_along_axis(counts, anchors[:, :, None], axis=2)[:, :, 0]
    delta = own / sizes
    state = np.where(delta >= victory_threshold, int(PollState.WIN),
                     np.where(delta < 1.0 - victory_threshold,
                              int(PollState.LOSE), int(PollState.DEADLOCK)))

    stick_phase = strategies[:, :, :, int(phase)]          # (B, N, 3)
    stick = np.take_along_axis(stick_phase, state[:, :, None], axis=2)[:, :, 0]
    sticks = draws[:, 0, :] < stick

    rivals = counts.copy()
    np.put_along_axis(rivals, anchors[:, :, None], -1, axis=2)
    best = rivals.max(axis=2)
    has_alternative = best > 0  # rival party actually present in the poll

    is_tied = rivals == best[:, :, None]
    n_tied = is_tied.sum(axis=2)
    pick = np.minimum((draws[:, 1, :] * n_tied).astype(np.int64), n_tied - 1)
    order = is_tied.cumsum(axis=2)
    chosen = np.argmax((order == (pick + 1)[:, :, None]) & is_tied, axis=2)

    # stick -> vote the anchored party; defect -> strongest rival of the
    # anchor when one is visible, else keep the current vote
    out = np.where(sticks, anchors, np.where(has_alternative, chosen, votes))
    return out


def poll_counts_parties(poll, votes, n_parties):
    """(B, N, P) per-poll party counts for a batch of vote vectors."""
    onehot = np.zeros(votes.shape + (n_parties,), dtype=np.int16)
    np.put_along_axis(onehot, votes[:, :, None], 1, axis=2)
    return np.einsum("bij,bjp->bip", poll.astype(np.int16), onehot)


def step(graph: Graph, votes, strategies: StrategyMatrix, phase: Phase,
         victory_threshold: float, rng_or_draws, assigned=None) -> np.ndarray:
    """One synchronous tick on a single election.

    ``rng_or_draws`` is either a Generator (two uniforms per voter are drawn:
    a stick roll, then a tie-break roll) or a prepared (2, N) array.  With
    ``assigned`` absent each voter's stick-probability protects its current
    vote; passing the assigned party codes anchors it to those instead.
    """
    votes = np.asarray(votes, dtype=np.int64)
    n = graph.node_count
    if isinstance(rng_or_draws, np.ndarray):
        draws = rng_or_draws[None, :, :]
    else:
        draws = make_rng(rng_or_draws).random((1, 2, n))
    anchors = votes if assigned is None else np.asarray(assigned, dtype=np.int64)
    poll = graph.poll_matrix()[None, :, :].astype(np.uint8)
    sizes = poll.sum(axis=2)
    n_parties = max(int(votes.max()) + 1, int(anchors.max()) + 1, 2)
    out = _step_many(poll, sizes, votes[None, :], anchors[None, :],
                     strategies.values[None], phase, victory_threshold, draws,
                     n_parties)
    return out[0]


@dataclass(frozen=True)
class ElectionOutcome:
    """Result of one election: trajectory of vote shares plus the verdict."""

    parties: tuple
    trajectory: np.ndarray      # (ticks + 1, parties) vote shares
    victory_threshold: float

    @property
    def final_shares(self) -> dict:
        return {p: float(s) for p, s in zip(self.parties, self.trajectory[-1])}

    @property
    def winner(self):
        """Party reaching the victory threshold, or None on deadlock."""
        final = self.trajectory[-1]
        top = int(final.argmax())
        return self.parties[top] if final[top] >= self.victory_threshold else None

    @property
    def is_deadlock(self) -> bool:
        return self.winner is None

    def final_skew(self, party) -> float:
        idx = self.parties.index(party)
        return float(self.trajectory[-1, idx]) - 0.5

    @property
    def final_skews(self) -> dict:
        return {p: self.final_skew(p) for p in self.parties}


def _run_batch_elections(polls, votes0, strategies, draws, config, n_parties,
                         stick_to=DEFAULT_STICK_MODE):
    """Run many elections in lockstep.  Returns (B, T+1, P) share trajectories
    and the final (B, N) vote vectors."""
    if stick_to not in STICK_MODES:
        raise ValueError(f"stick_to must be one of {STICK_MODES}")
    b, n = votes0.shape
    sizes = polls.sum(axis=2)
    t = config.n_ticks
    shares = np.empty((b, t + 1, n_parties))
    votes = votes0.copy()
    assigned = votes0 if stick_to == "assigned" else None

    def record(slot):
        counts = np.zeros((b, n_parties), dtype=np.int64)
        for i in range(n_parties):
            counts[:, i] = (votes == i).sum(axis=1)
        shares[:, slot, :] = counts / n

    record(0)
    for r in range(1, t + 1):
        anchors = assigned if assigned is not None else votes
        votes = _step_many(polls, sizes, votes, anchors, strategies,
                           config.phase_of_tick(r), config.victory_threshold,
                           draws[:, r - 1], n_parties)
        record(r)
    return shares, votes


def run_election(graph: Graph, assignment: PartyAssignment,
                 config: ElectionConfig, strategies: StrategyMatrix,
                 seed, stick_to: str = DEFAULT_STICK_MODE) -> ElectionOutcome:
    """Run the full synchronous-tick election and report the outcome.

    The seed (or Generator) supplies exactly n_ticks * 2 * N uniforms, drawn
    up front in tick order, so identical inputs give identical trajectories.
    """
    if strategies.n_voters != graph.node_count:
        raise ValueError("strategy matrix does not match the voter count")
    if assignment.node_count != graph.node_count:
        raise ValueError("assignment does not match the graph")
    rng = make_rng(seed)
    draws = rng.random((1, config.n_ticks, 2, graph.node_count))
    poll = graph.poll_matrix()[None, :, :].astype(np.uint8)
    votes0 = assignment.codes[None, :].astype(np.int64)
    shares, _ = _run_batch_elections(poll, votes0, strategies.values[None],
                                     draws, config, assignment.n_parties,
                                     stick_to)
    return ElectionOutcome(assignment.parties, shares[0], config.victory_threshold)
