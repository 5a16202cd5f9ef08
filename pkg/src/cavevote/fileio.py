"""Text formats: graph/assignment files, the sweep records CSV, surface and
trajectory CSVs, strategy-sample files and sweep config files."""

from __future__ import annotations

import csv
import json
from fractions import Fraction
from pathlib import Path

import numpy as np

from .dynamics import Phase, PollState
from .experiments import ElectionRecord, SurfacePoint, SweepConfig
from .graphs import Graph, PartyAssignment

try:
    import tomllib as _toml
except ModuleNotFoundError:  # Python 3.10
    import tomli as _toml

RECORDS_HEADER = ("seed,l,k,p0,h,n_red,n_blue,n_green,ig_red,ig_blue,ig_green,"
                  "majority,dvs,eg,final_skew_red,final_skew_blue,"
                  "final_skew_green,winner")
SURFACE_HEADER = "p0,h,mean_abs_ig,samples,stderr"

_STATE_KEYS = {"win": PollState.WIN, "deadlock": PollState.DEADLOCK,
               "lose": PollState.LOSE}
_PHASE_KEYS = {"early": Phase.EARLY, "late": Phase.LATE}


def write_graph(path, graph: Graph):
    """Edge-list format: header ``nodes=N cliques=l``, then one ``u v`` line
    per edge."""
    if graph.clique_labels is None:
        raise ValueError("graph carries no clique labels")
    l = int(max(graph.clique_labels)) + 1
    lines = [f"nodes={graph.node_count} cliques={l}"]
    lines += [f"{u} {v}" for u, v in sorted(graph.edges)]
    Path(path).write_text("\n".join(lines) + "\n")


def read_graph(path) -> Graph:
    lines = [ln for ln in Path(path).read_text().splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("nodes="):
        raise ValueError("graph file must start with a 'nodes=N cliques=l' header")
    head = dict(part.split("=") for part in lines[0].split())
    n, l = int(head["nodes"]), int(head["cliques"])
    if n % l != 0:
        raise ValueError("node count must be divisible by the clique count")
    k = n // l
    edges = set()
    for ln in lines[1:]:
        u, v = (int(x) for x in ln.split())
        edges.add((u, v) if u < v else (v, u))
    labels = tuple(i // k for i in range(n))
    return Graph(n, frozenset(edges), labels)


def write_assignment(path, assignment: PartyAssignment):
    """One ``node party`` line per node, in node order."""
    lines = [f"{n} {assignment.party_of(n)}" for n in range(assignment.node_count)]
    Path(path).write_text("\n".join(lines) + "\n")


def read_assignment(path) -> PartyAssignment:
    """Parties are ordered by first appearance in the file."""
    entries = {}
    parties = []
    for ln in Path(path).read_text().splitlines():
        if not ln.strip():
            continue
        node_s, party = ln.split()
        node = int(node_s)
        if party not in parties:
            parties.append(party)
        entries[node] = parties.index(party)
    if sorted(entries) != list(range(len(entries))):
        raise ValueError("assignment must cover nodes 0..N-1 exactly once")
    codes = np.array([entries[n] for n in range(len(entries))])
    return PartyAssignment(tuple(parties), codes)


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, Fraction):
        return repr(float(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return repr(float(value))


def record_to_row(record: ElectionRecord) -> str:
    per_party = []
    for key in ("red", "blue", "green"):
        per_party.append(record.counts.get(key))
    gaps = [record.gaps.get(key) for key in ("red", "blue", "green")]
    skews = [record.final_skews.get(key) for key in ("red", "blue", "green")]
    fields = [record.seed, record.clique_count, record.clique_size,
              record.p0, record.h, *per_party, *gaps,
              record.majority, record.voter_skew, record.efficiency,
              *skews, record.winner]
    return ",".join(_fmt(f) if not isinstance(f, str) else f for f in fields)


def write_records(path, records):
    with open(path, "w") as fh:
        fh.write(RECORDS_HEADER + "\n")
        for record in records:
            fh.write(record_to_row(record) + "\n")


def _opt_float(s: str):
    return None if s == "" else float(s)


def _opt_int(s: str):
    return None if s == "" else int(s)


def read_records(path):
    """Parse a records CSV back into ElectionRecord objects."""
    records = []
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != RECORDS_HEADER.split(","):
            raise ValueError("records CSV header does not match the schema")
        for row in reader:
            counts = {p: _opt_int(row[f"n_{p}"]) for p in ("red", "blue", "green")}
            counts = {p: c for p, c in counts.items() if c is not None}
            gaps = {p: _opt_float(row[f"ig_{p}"]) for p in ("red", "blue", "green")}
            gaps = {p: g for p, g in gaps.items() if g is not None}
            skews = {p: _opt_float(row[f"final_skew_{p}"])
                     for p in ("red", "blue", "green")}
            skews = {p: s for p, s in skews.items() if s is not None}
            records.append(ElectionRecord(
                seed=int(row["seed"]), clique_count=int(row["l"]),
                clique_size=int(row["k"]), p0=float(row["p0"]),
                h=float(row["h"]), counts=counts, gaps=gaps,
                majority=_opt_float(row["majority"]),
                voter_skew=_opt_float(row["dvs"]),
                efficiency=_opt_float(row["eg"]),
                final_skews=skews, winner=row["winner"]))
    return records


def write_surface(path, points):
    with open(path, "w") as fh:
        fh.write(SURFACE_HEADER + "\n")
        for p in points:
            fh.write(f"{_fmt(p.p0)},{_fmt(p.h)},{_fmt(p.mean_abs_gap)},"
                     f"{p.samples},{_fmt(p.stderr)}\n")


def read_surface(path):
    points = []
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != SURFACE_HEADER.split(","):
            raise ValueError("surface CSV header does not match the schema")
        for row in reader:
            points.append(SurfacePoint(float(row["p0"]), float(row["h"]),
                                       float(row["mean_abs_ig"]),
                                       int(row["samples"]),
                                       float(row["stderr"])))
    return points


def write_trajectory(path, outcome, tick_s: float):
    """Per-tick vote shares: ``tick,t_seconds,share_<party>...``."""
    header = "tick,t_seconds," + ",".join(f"share_{p}" for p in outcome.parties)
    with open(path, "w") as fh:
        fh.write(header + "\n")
        for tick, row in enumerate(outcome.trajectory):
            shares = ",".join(repr(float(s)) for s in row)
            fh.write(f"{tick},{repr(tick * tick_s)},{shares}\n")


def read_strategy_samples(path) -> dict:
    """Empirical stick-probability samples, as JSON mapping ``state_phase``
    (e.g. ``win_early``) to an array of values in [0, 1]."""
    raw = json.loads(Path(path).read_text())
    table = {}
    for key, values in raw.items():
        state_s, _, phase_s = key.partition("_")
        if state_s not in _STATE_KEYS or phase_s not in _PHASE_KEYS:
            raise ValueError(f"unknown strategy table key {key!r}")
        arr = np.asarray(values, dtype=float)
        if arr.ndim != 1 or len(arr) == 0 or arr.min() < 0 or arr.max() > 1:
            raise ValueError(f"samples for {key!r} must be probabilities")
        table[(_STATE_KEYS[state_s], _PHASE_KEYS[phase_s])] = arr
    return table


_CONFIG_KEYS = {
    "l": ("clique_count", int),
    "k": ("clique_size", int),
    "p0": ("p0_grid", lambda v: tuple(float(x) for x in v)),
    "h": ("h_grid", lambda v: tuple(float(x) for x in v)),
    "elections": ("elections_per_cell", int),
    "parties": ("parties", lambda v: tuple(str(x) for x in v)),
    "red_min": ("red_min", int),
    "red_max": ("red_max", int),
    "min_count": ("min_count", int),
    "victory_threshold": ("victory_threshold", float),
    "duration": ("duration_s", float),
    "cutoff": ("early_cutoff_s", float),
    "tick": ("tick_s", float),
    "concentration": ("concentration", float),
    "strategy_file": ("strategy_file", str),
    "stick_to": ("stick_to", str),
    "seed": ("master_seed", int),
}


def load_sweep_config(path=None, overrides=None) -> SweepConfig:
    """Build a SweepConfig from a flat TOML file plus per-key overrides
    (override values use the same keys as the file)."""
    raw = {}
    if path is not None:
        with open(path, "rb") as fh:
            raw.update(_toml.load(fh))
    for key, value in (overrides or {}).items():
        if value is not None:
            raw[key] = value
    kwargs = {}
    for key, value in raw.items():
        if key not in _CONFIG_KEYS:
            raise ValueError(f"unknown sweep config key {key!r}")
        name, conv = _CONFIG_KEYS[key]
        kwargs[name] = conv(value)
    if "master_seed" not in kwargs:
        raise ValueError("a sweep needs a seed ('seed' key or --seed)")
    return SweepConfig(**kwargs)
