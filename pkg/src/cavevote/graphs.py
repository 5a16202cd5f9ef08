"""Community-structured graphs: caveman families, homophilic rewiring, party placement."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

SeedLike = "int | np.random.SeedSequence | np.random.Generator"


def make_rng(seed) -> np.random.Generator:
    """Coerce an int, SeedSequence or Generator into a Generator."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


@dataclass(frozen=True)
class Graph:
    """Undirected simple graph over nodes 0..node_count-1.

    ``clique_labels`` carries the community index each node belonged to in the
    original caveman construction; rewiring preserves it so downstream code can
    use the communities as districts.
    """

    node_count: int
    edges: frozenset
    clique_labels: tuple | None = None

    def __post_init__(self):
        if self.node_count <= 0:
            raise ValueError("node_count must be positive")
        for u, v in self.edges:
            if u == v:
                raise ValueError(f"self-loop on node {u}")
            if not (0 <= u < v < self.node_count):
                raise ValueError(f"edge ({u},{v}) out of range or unordered")
        if self.clique_labels is not None and len(self.clique_labels) != self.node_count:
            raise ValueError("clique_labels length must equal node_count")

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def neighbors(self, n: int) -> tuple:
        return self.adjacency[n]

    def degree(self, n: int) -> int:
        return len(self.adjacency[n])

    @property
    def adjacency(self):
        """Tuple of sorted neighbor tuples, one per node (cached)."""
        cached = self.__dict__.get("_adjacency")
        if cached is None:
            adj = [[] for _ in range(self.node_count)]
            for u, v in self.edges:
                adj[u].append(v)
                adj[v].append(u)
            cached = tuple(tuple(sorted(a)) for a in adj)
            self.__dict__["_adjacency"] = cached
        return cached

    def poll_matrix(self) -> np.ndarray:
        """Boolean (N, N) matrix; row n marks n's poll (self plus neighbors)."""
        m = np.zeros((self.node_count, self.node_count), dtype=bool)
        np.fill_diagonal(m, True)
        for u, v in self.edges:
            m[u, v] = True
            m[v, u] = True
        return m

    def with_edges(self, edges) -> "Graph":
        return Graph(self.node_count, frozenset(edges), self.clique_labels)


@dataclass(frozen=True)
class PartyAssignment:
    """Node -> party map with a fixed, ordered party universe.

    Strong party assignment always yields positive per-party counts; a
    hand-built assignment may declare a party with no voters (useful when
    analysing uniform districts against a named rival).
    """

    parties: tuple
    codes: np.ndarray  # party index per node

    def __post_init__(self):
        if len(set(self.parties)) != len(self.parties):
            raise ValueError("duplicate party identifiers")
        codes = np.asarray(self.codes, dtype=np.int64)
        object.__setattr__(self, "codes", codes)
        if codes.ndim != 1 or len(codes) == 0:
            raise ValueError("codes must be a non-empty 1-D array")
        if codes.min() < 0 or codes.max() >= len(self.parties):
            raise ValueError("party code out of range")

    @property
    def node_count(self) -> int:
        return len(self.codes)

    @property
    def n_parties(self) -> int:
        return len(self.parties)

    def party_of(self, n: int):
        return self.parties[self.codes[n]]

    def counts(self) -> dict:
        binc = np.bincount(self.codes, minlength=len(self.parties))
        return {p: int(binc[i]) for i, p in enumerate(self.parties)}

    def index_of(self, party) -> int:
        try:
            return self.parties.index(party)
        except ValueError:
            raise ValueError(f"unknown party {party!r}") from None


@dataclass(frozen=True)
class HrcParams:
    """Shape of a homophilic relaxed-caveman graph: l cliques of size k,
    rewire probability p0, homophily factor h."""

    clique_count: int
    clique_size: int
    rewire_probability: float
    homophily: float

    def __post_init__(self):
        if self.clique_count < 1 or self.clique_size < 1:
            raise ValueError("clique_count and clique_size must be >= 1")
        if not 0.0 <= self.rewire_probability <= 1.0:
            raise ValueError("rewire_probability must lie in [0, 1]")
        if not 0.0 <= self.homophily <= 1.0:
            raise ValueError("homophily must lie in [0, 1]")

    @property
    def node_count(self) -> int:
        return self.clique_count * self.clique_size


@dataclass
class RewireStats:
    """Bookkeeping from one rewiring pass over the caveman edge list."""

    attempts: int = 0    # probability gate fired
    rewired: int = 0     # edge actually moved
    collisions: int = 0  # gate fired but target edge already present
    added_edges: list = field(default_factory=list)


def build_caveman(l: int, k: int) -> Graph:
    """l disjoint cliques of size k; nodes c*k..(c+1)*k-1 form clique c."""
    if l < 1 or k < 1:
        raise ValueError("need l >= 1 and k >= 1")
    edges = set()
    for c in range(l):
        base = c * k
        for i in range(base, base + k):
            for j in range(i + 1, base + k):
                edges.add((i, j))
    labels = tuple(n // k for n in range(l * k))
    return Graph(l * k, frozenset(edges), labels)


def _caveman_edge_order(l: int, k: int):
    """Deterministic rewiring order: clique index, then lexicographic pairs."""
    order = []
    for c in range(l):
        base = c * k
        for i in range(base, base + k):
            for j in range(i + 1, base + k):
                order.append((i, j))
    return order


def assign_parties_spa(graph: Graph, counts: dict, seed) -> PartyAssignment:
    """Strong party assignment: place exactly counts[P] voters of each party
    uniformly at random over the nodes."""
    total = sum(counts.values())
    if total != graph.node_count:
        raise ValueError(f"counts sum to {total}, graph has {graph.node_count} nodes")
    if any(c <= 0 for c in counts.values()):
        raise ValueError("every party count must be positive")
    parties = tuple(counts.keys())
    flat = np.repeat(np.arange(len(parties)), [counts[p] for p in parties])
    rng = make_rng(seed)
    codes = rng.permutation(flat)
    return PartyAssignment(parties, codes)


def _draw_node_excluding(rng, n_nodes: int, u: int, v: int) -> int:
    """Uniform draw from all nodes except u and v."""
    x = int(rng.integers(n_nodes - 2))
    lo, hi = (u, v) if u < v else (v, u)
    if x >= lo:
        x += 1
    if x >= hi:
        x += 1
    return x


def _rewire_pass(l, k, prob_of, rng, stats=None):
    """Single pass over the original caveman edges, rewiring (u,v)->(u,n).

    A rewire whose target pair already exists, or whose target lies in u's own
    clique, leaves the graph unchanged (the source edge is retained).  Same-
    clique targets count as collisions even when the clique edge was removed
    earlier in the pass, so every added edge joins distinct cliques.
    """
    n_nodes = l * k
    edges = set(_caveman_edge_order(l, k))
    for u, v in _caveman_edge_order(l, k):
        n = _draw_node_excluding(rng, n_nodes, u, v)
        ptilde = prob_of(u, n)
        if rng.random() >= ptilde:
            continue
        if stats is not None:
            stats.attempts += 1
        new = (u, n) if u < n else (n, u)
        if u // k == n // k or new in edges:
            if stats is not None:
                stats.collisions += 1
            continue
        edges.remove((u, v))
        edges.add(new)
        if stats is not None:
            stats.rewired += 1
            stats.added_edges.append(new)
    return edges


def generate_hrc(params: HrcParams, assignment: PartyAssignment, seed,
                 with_stats: bool = False):
    """Homophilic relaxed-caveman graph.

    Starting from l isolated k-cliques, each original edge (u,v) draws a
    target n uniformly from the other nodes and is rewired to (u,n) with
    probability p0*h when u and n share a party, p0*(1-h) otherwise.
    """
    if assignment.node_count != params.node_count:
        raise ValueError("assignment must cover exactly clique_count*clique_size nodes")
    rng = make_rng(seed)
    p0, h = params.rewire_probability, params.homophily
    codes = assignment.codes

    def prob_of(u, n):
        return p0 * h if codes[u] == codes[n] else p0 * (1.0 - h)

    stats = RewireStats() if with_stats else None
    edges = _rewire_pass(params.clique_count, params.clique_size, prob_of, rng, stats)
    labels = tuple(n // params.clique_size for n in range(params.node_count))
    graph = Graph(params.node_count, frozenset(edges), labels)
    return (graph, stats) if with_stats else graph


def _caveman_shape(graph: Graph):
    """Recover (l, k) of a caveman graph, or raise if the graph is not one."""
    if graph.clique_labels is None:
        raise ValueError("graph carries no clique labels")
    labels = np.asarray(graph.clique_labels)
    l = int(labels.max()) + 1
    if graph.node_count % l != 0:
        raise ValueError("clique labels are not evenly sized")
    k = graph.node_count // l
    if not np.array_equal(labels, np.arange(graph.node_count) // k):
        raise ValueError("clique labels are not contiguous blocks")
    if graph.edges != frozenset(_caveman_edge_order(l, k)):
        raise ValueError("graph is not a set of isolated cliques")
    return l, k


def rewire_relaxed(graph: Graph, p: float, seed, with_stats: bool = False):
    """Party-blind relaxed-caveman rewiring: every edge rewires with fixed
    probability p, matching the homophilic generator at h=0.5, p0=2p."""
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must lie in [0, 1]")
    l, k = _caveman_shape(graph)
    rng = make_rng(seed)
    stats = RewireStats() if with_stats else None
    edges = _rewire_pass(l, k, lambda u, n: p, rng, stats)
    out = Graph(graph.node_count, frozenset(edges), graph.clique_labels)
    return (out, stats) if with_stats else out


def poll_fractions(graph: Graph, assignment: PartyAssignment, n: int) -> dict:
    """Exact per-party fractions of node n's poll (self plus neighbors)."""
    if not 0 <= n < graph.node_count:
        raise ValueError(f"node {n} out of range")
    counts = [0] * assignment.n_parties
    counts[assignment.codes[n]] += 1
    for m in graph.neighbors(n):
        counts[assignment.codes[m]] += 1
    size = graph.degree(n) + 1
    return {p: Fraction(c, size) for p, c in zip(assignment.parties, counts)}


def complete_graph(n: int) -> Graph:
    """Single n-clique (one community)."""
    return build_caveman(1, n)


def line_graph(n: int) -> Graph:
    """Path 0-1-...-(n-1); no community labels."""
    if n < 1:
        raise ValueError("need n >= 1")
    return Graph(n, frozenset((i, i + 1) for i in range(n - 1)))


def star_graph(n_leaves: int) -> Graph:
    """Node 0 joined to n_leaves leaves; no community labels."""
    if n_leaves < 1:
        raise ValueError("need at least one leaf")
    return Graph(n_leaves + 1, frozenset((0, i) for i in range(1, n_leaves + 1)))
