"""Batch experiment harness: seeded parameter sweeps over (p0, h, party split),
start-of-election metric collection, election execution, correlation and
regression analysis, and the homophily/rewire surface."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import metrics as mt
from .dynamics import (DEFAULT_CONCENTRATION, DEFAULT_STICK_MODE, STICK_MODES,
                       BehaviorDistribution, ElectionConfig,
                       _run_batch_elections, sample_strategies)
from .graphs import Graph, HrcParams, PartyAssignment, assign_parties_spa, \
    build_caveman, generate_hrc

TWO_PARTIES = ("red", "blue")
THREE_PARTIES = ("red", "blue", "green")


@dataclass(frozen=True)
class SweepConfig:
    """Full description of one reproducible sweep.

    Two-party sweeps draw the red count uniformly from [red_min, red_max];
    three-party sweeps draw a uniformly random composition with every party
    holding at least ``min_count`` voters.
    """

    master_seed: int
    clique_count: int = 4
    clique_size: int = 5
    p0_grid: tuple = (0.0, 0.4, 1.0)
    h_grid: tuple = tuple(round(0.1 * i, 1) for i in range(11))
    elections_per_cell: int = 2000
    parties: tuple = TWO_PARTIES
    red_min: int = 10
    red_max: int = 16
    min_count: int = 2
    victory_threshold: float = 0.6
    duration_s: float = 240.0
    early_cutoff_s: float = 83.0
    tick_s: float = 3.3
    concentration: float = DEFAULT_CONCENTRATION
    strategy_file: "str | None" = None
    stick_to: str = DEFAULT_STICK_MODE

    def __post_init__(self):
        if self.stick_to not in STICK_MODES:
            raise ValueError(f"stick_to must be one of {STICK_MODES}")
        if not self.p0_grid or not self.h_grid:
            raise ValueError("p0 and h grids must be non-empty")
        if self.elections_per_cell < 1:
            raise ValueError("need at least one election per cell")
        if len(self.parties) not in (2, 3):
            raise ValueError("sweeps support two or three parties")
        n = self.clique_count * self.clique_size
        if len(self.parties) == 2:
            if not 0 < self.red_min <= self.red_max < n:
                raise ValueError("red count range must leave both parties voters")
        elif n < len(self.parties) * self.min_count:
            raise ValueError("graph too small for the minimum per-party count")

    @property
    def node_count(self) -> int:
        return self.clique_count * self.clique_size

    def election_config(self) -> ElectionConfig:
        return ElectionConfig(self.duration_s, self.early_cutoff_s,
                              self.tick_s, self.victory_threshold)

    def cells(self):
        """(cell_index, p0, h) triples in deterministic order."""
        i = 0
        for p0 in self.p0_grid:
            for h in self.h_grid:
                yield i, p0, h
                i += 1


@dataclass(frozen=True)
class ElectionRecord:
    """One simulated election: start-of-game metrics plus the final outcome."""

    seed: int
    clique_count: int
    clique_size: int
    p0: float
    h: float
    counts: dict               # party -> initial voter count
    gaps: dict                 # party -> influence gap (float)
    majority: "float | None"   # red count above parity (two parties)
    voter_skew: "float | None"
    efficiency: "float | None"
    final_skews: dict          # party -> final vote share - 1/2
    winner: str                # party name or "deadlock"


def _behavior(config: SweepConfig) -> BehaviorDistribution:
    empirical = None
    if config.strategy_file is not None:
        from .fileio import read_strategy_samples
        empirical = read_strategy_samples(config.strategy_file)
    return BehaviorDistribution(concentration=config.concentration,
                                empirical=empirical)


def _draw_counts(config: SweepConfig, rng) -> dict:
    n = config.node_count
    if len(config.parties) == 2:
        red = int(rng.integers(config.red_min, config.red_max + 1))
        return {"red": red, "blue": n - red}
    # uniform composition with min_count per party, via stars and bars
    m = n - len(config.parties) * config.min_count
    bars = np.sort(rng.choice(m + 2, size=2, replace=False))
    parts = (int(bars[0]), int(bars[1] - bars[0] - 1), int(m + 1 - bars[1]))
    return {p: config.min_count + parts[i] for i, p in enumerate(config.parties)}


def _gap_floats(graph: Graph, assignment: PartyAssignment) -> dict:
    assorts = mt._all_party_assortments(graph, assignment, mt.DEFAULT_ASSORTMENT)
    gaps = {}
    for i, p in enumerate(assignment.parties):
        rival = max(a for j, a in enumerate(assorts) if j != i)
        gaps[p] = float(assorts[i] - rival)
    return gaps


class SweepError(RuntimeError):
    """A cell of the sweep failed; carries the cell context."""


def _run_cell(config: SweepConfig, cell_index: int, p0: float, h: float):
    """All elections of one grid cell, in repetition order."""
    try:
        return _run_cell_inner(config, cell_index, p0, h)
    except SweepError:
        raise
    except Exception as exc:
        raise SweepError(f"cell {cell_index} (p0={p0}, h={h}) failed: "
                         f"{exc}") from exc


def _run_cell_inner(config: SweepConfig, cell_index: int, p0: float, h: float):
    n = config.node_count
    reps = config.elections_per_cell
    econf = config.election_config()
    ticks = econf.n_ticks
    base = build_caveman(config.clique_count, config.clique_size)
    behavior = _behavior(config)
    two_party = len(config.parties) == 2

    polls = np.empty((reps, n, n), dtype=np.uint8)
    votes0 = np.empty((reps, n), dtype=np.int64)
    strat = np.empty((reps, n, 3, 2))
    draws = np.empty((reps, ticks, 2, n))
    partial = []

    for rep in range(reps):
        ss = np.random.SeedSequence(config.master_seed,
                                    spawn_key=(cell_index, rep))
        seed_id = int(ss.generate_state(1, np.uint64)[0])
        rng = np.random.default_rng(ss)
        counts = _draw_counts(config, rng)
        assignment = assign_parties_spa(base, counts, rng)
        params = HrcParams(config.clique_count, config.clique_size, p0, h)
        graph = generate_hrc(params, assignment, rng)

        gaps = _gap_floats(graph, assignment)
        majority = voter_skew = efficiency = None
        if two_party:
            majority = float(mt.initial_majority(assignment, "red"))
            voter_skew = float(mt.deterministic_voter_skew(graph, assignment, "red"))
            efficiency = float(mt.efficiency_gap(graph, assignment, "red"))

        strategies = sample_strategies(behavior, n, rng)
        polls[rep] = graph.poll_matrix()
        votes0[rep] = assignment.codes
        strat[rep] = strategies.values
        draws[rep] = rng.random((ticks, 2, n))
        partial.append((seed_id, counts, gaps, majority, voter_skew, efficiency))

    shares, _ = _run_batch_elections(polls, votes0, strat, draws, econf,
                                     len(config.parties), config.stick_to)
    records = []
    for rep, (seed_id, counts, gaps, majority, voter_skew, efficiency) in enumerate(partial):
        final = shares[rep, -1]
        skews = {p: float(final[i]) - 0.5 for i, p in enumerate(config.parties)}
        top = int(final.argmax())
        winner = (config.parties[top]
                  if final[top] >= config.victory_threshold else "deadlock")
        records.append(ElectionRecord(
            seed=seed_id, clique_count=config.clique_count,
            clique_size=config.clique_size, p0=p0, h=h, counts=counts,
            gaps=gaps, majority=majority, voter_skew=voter_skew,
            efficiency=efficiency, final_skews=skews, winner=winner))
    return records


def run_batch(config: SweepConfig, workers: int = 1):
    """Yield every election record of the sweep in deterministic (cell,
    repetition) order; the output does not depend on the worker count."""
    cells = list(config.cells())
    if workers <= 1:
        for cell_index, p0, h in cells:
            yield from _run_cell(config, cell_index, p0, h)
        return
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(_run_cell, config, ci, p0, h)
                   for ci, p0, h in cells]
        for fut in futures:
            yield from fut.result()


def pearson(xs, ys) -> float:
    """Sample Pearson correlation; refuses constant inputs."""
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError("inputs must be equal-length 1-D sequences")
    if len(x) < 2:
        raise ValueError("need at least two observations")
    dx = x - x.mean()
    dy = y - y.mean()
    sx = np.sqrt((dx * dx).sum())
    sy = np.sqrt((dy * dy).sum())
    if sx == 0.0 or sy == 0.0:
        raise ValueError("correlation undefined for constant input")
    return float((dx * dy).sum() / (sx * sy))


@dataclass(frozen=True)
class RegressionResult:
    """OLS fit with intercept, scored out of sample."""

    coefficients: tuple
    intercept: float
    r_squared: float
    train_fraction: float
    n_train: int
    n_test: int


def ols_fit(features, target, train_fraction: float = 0.7, seed=0) -> RegressionResult:
    """Least squares on a seeded random train split; R^2 on the held-out rows.

    ``features`` is an (n, k) matrix, or a plain length-n sequence for a
    single-feature model.
    """
    x = np.asarray(features, dtype=float)
    if x.ndim == 1:
        x = x[:, None]
    y = np.asarray(target, dtype=float)
    n, k = x.shape
    if len(y) != n:
        raise ValueError("feature rows and target length differ")
    if n < k + 1:
        raise ValueError("need more rows than coefficients")
    if not 0.0 < train_fraction < 1.0:
        raise ValueError("train fraction must lie in (0, 1)")

    rng = np.random.default_rng(seed)
    perm = rng.permutation(n)
    n_train = max(k + 1, int(n * train_fraction))
    if n_train >= n:
        raise ValueError("train split leaves no test rows")
    train, test = perm[:n_train], perm[n_train:]

    design = np.hstack([x, np.ones((n, 1))])
    if np.linalg.matrix_rank(design[train]) < k + 1:
        raise ValueError("rank-deficient design matrix")
    beta, *_ = np.linalg.lstsq(design[train], y[train], rcond=None)

    pred = design[test] @ beta
    resid = y[test] - pred
    total = y[test] - y[test].mean()
    r2 = 1.0 - float(resid @ resid) / float(total @ total)
    return RegressionResult(tuple(float(b) for b in beta[:-1]), float(beta[-1]),
                            r2, train_fraction, len(train), len(test))


@dataclass(frozen=True)
class SurfacePoint:
    """Mean absolute influence gap at one (p0, h) grid point."""

    p0: float
    h: float
    mean_abs_gap: float
    samples: int
    stderr: float


def surface_mean_abs_gap(h_grid, p0_grid, samples_per_point: int,
                         clique_count: int = 25, clique_size: int = 4,
                         seed=0):
    """Mean |influence gap| under equal representation across the (p0, h) grid.

    Sample seeds are keyed by (p0 index, sample index) only, so every point in
    a p0 row sees the same assignments; with zero rewiring the generator output
    is the plain caveman graph and the whole row is exactly constant in h.

    The default shape uses many small even-sized communities: exact community
    ties then absorb most assignment noise, the unrewired baseline gap sits
    low, and rewiring visibly drives the mean gap up.  Large or odd-sized
    communities start from a high-variance baseline instead and the trend in
    the rewire probability reverses.
    """
    if samples_per_point < 1:
        raise ValueError("need at least one sample per point")
    n = clique_count * clique_size
    if n % 2 != 0:
        raise ValueError("equal representation needs an even voter count")
    base = build_caveman(clique_count, clique_size)
    half = n // 2
    points = []
    for i_p0, p0 in enumerate(p0_grid):
        for h in h_grid:
            values = np.empty(samples_per_point)
            for s in range(samples_per_point):
                ss = np.random.SeedSequence(seed, spawn_key=(i_p0, s))
                rng = np.random.default_rng(ss)
                assignment = assign_parties_spa(base, {"red": half, "blue": half}, rng)
                params = HrcParams(clique_count, clique_size, p0, h)
                graph = generate_hrc(params, assignment, rng)
                values[s] = abs(float(mt.influence_gap_value(graph, assignment, "red")))
            stderr = (float(values.std(ddof=1)) / np.sqrt(samples_per_point)
                      if samples_per_point > 1 else 0.0)
            points.append(SurfacePoint(p0, h, float(values.mean()),
                                       samples_per_point, stderr))
    return points


@dataclass(frozen=True)
class PccPoint:
    """Correlation between one initial metric and the final skew, per cell."""

    p0: float
    h: float
    metric: str
    party: str
    value: "float | None"
    count: int
    note: "str | None" = None


def _record_metric(record: ElectionRecord, metric: str, party: str):
    if metric == "majority":
        return record.majority
    if metric == "ig":
        return record.gaps.get(party)
    if metric == "dvs":
        return record.voter_skew
    if metric == "eg":
        return record.efficiency
    if metric == "votes":
        return record.counts.get(party)
    raise ValueError(f"unknown metric {metric!r}")


def pcc_curves(records, metrics=None, parties=None):
    """Per-(p0, h) Pearson correlation between each initial metric and the
    final voter skew.  Degenerate groups are reported with a note instead of
    being dropped."""
    records = list(records)
    if not records:
        raise ValueError("no records")
    all_parties = tuple(records[0].counts.keys())
    two_party = len(all_parties) == 2
    if metrics is None:
        metrics = ("majority", "ig", "dvs", "eg") if two_party else ("votes", "ig")
    if parties is None:
        parties = ("red",) if two_party else all_parties

    groups = {}
    for r in records:
        groups.setdefault((r.p0, r.h), []).append(r)

    points = []
    for (p0, h), group in sorted(groups.items()):
        for metric in metrics:
            for party in parties:
                xs = [_record_metric(r, metric, party) for r in group]
                ys = [r.final_skews[party] for r in group]
                if any(v is None for v in xs):
                    points.append(PccPoint(p0, h, metric, party, None,
                                           len(group), "metric not defined"))
                    continue
                if len(group) < 2:
                    points.append(PccPoint(p0, h, metric, party, None,
                                           len(group), "fewer than two records"))
                    continue
                try:
                    value = pearson(xs, ys)
                except ValueError as exc:
                    points.append(PccPoint(p0, h, metric, party, None,
                                           len(group), str(exc)))
                    continue
                points.append(PccPoint(p0, h, metric, party, value, len(group)))
    return points
