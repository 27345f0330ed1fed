"""Grid topology model, file format, node removal, and test-instance generators.

A grid is an undirected graph whose nodes carry two independent role flags:
source (producer) and load (consumer). Nodes with neither flag are
transmission nodes; a node may carry both flags. Node ids are dense
non-negative integers fixed at parse/generation time and are never renumbered
by subgraph operations, so strategy sets stay meaningful across removals.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

from .errors import GridParseError

Edge = tuple[int, int]

ROLE_CODES = {"S", "L", "T", "SL"}


def norm_edge(u: int, v: int) -> Edge:
    """Canonical unordered pair: smaller id first."""
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class GridNetwork:
    """Immutable undirected grid graph with per-node role flags."""

    nodes: tuple[int, ...]
    edges: frozenset[Edge]
    sources: frozenset[int]
    loads: frozenset[int]
    _adj: dict[int, tuple[int, ...]] = field(
        init=False, repr=False, compare=False, hash=False, default_factory=dict
    )

    def __post_init__(self):
        node_set = set(self.nodes)
        if len(node_set) != len(self.nodes):
            raise ValueError("duplicate node ids")
        for u, v in self.edges:
            if u == v:
                raise ValueError(f"self-loop edge at node {u}")
            if (u, v) != norm_edge(u, v):
                raise ValueError(f"edge ({u}, {v}) not in canonical order")
            if u not in node_set or v not in node_set:
                raise ValueError(f"edge ({u}, {v}) references unknown node")
        if not (self.sources <= node_set and self.loads <= node_set):
            raise ValueError("role flag on unknown node")
        adj: dict[int, list[int]] = {i: [] for i in self.nodes}
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        object.__setattr__(
            self, "_adj", {i: tuple(sorted(ns)) for i, ns in adj.items()}
        )

    def neighbors(self, i: int) -> tuple[int, ...]:
        return self._adj[i]

    def has_node(self, i: int) -> bool:
        return i in self._adj

    @property
    def num_nodes(self) -> int:
        return len(self.nodes)

    @property
    def num_edges(self) -> int:
        return len(self.edges)


def make_network(
    nodes: Iterable[int],
    edges: Iterable[tuple[int, int]],
    sources: Iterable[int] = (),
    loads: Iterable[int] = (),
) -> GridNetwork:
    """Build a GridNetwork from loose iterables, normalizing edge order."""
    return GridNetwork(
        nodes=tuple(sorted(set(nodes))),
        edges=frozenset(norm_edge(u, v) for u, v in edges),
        sources=frozenset(sources),
        loads=frozenset(loads),
    )


def load_network(text: str) -> GridNetwork:
    """Parse the line-oriented grid file format.

    Lines are one of::

        # comment
        node <id> <role>     role in {S, L, T, SL}
        edge <id> <id>

    Declarations may appear in any order; every edge endpoint must be declared
    somewhere in the file. Duplicate edges collapse; duplicate node
    declarations are an error.
    """
    roles: dict[int, str] = {}
    raw_edges: list[tuple[int, int, int]] = []  # (u, v, line number)
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if parts[0] == "node":
            if len(parts) != 3:
                raise GridParseError("expected 'node <id> <role>'", lineno)
            try:
                node_id = int(parts[1])
            except ValueError:
                raise GridParseError(f"bad node id {parts[1]!r}", lineno) from None
            if node_id < 0:
                raise GridParseError(f"negative node id {node_id}", lineno)
            role = parts[2]
            if role not in ROLE_CODES:
                raise GridParseError(f"unknown role {role!r}", lineno)
            if node_id in roles:
                raise GridParseError(f"duplicate declaration of node {node_id}", lineno)
            roles[node_id] = role
        elif parts[0] == "edge":
            if len(parts) != 3:
                raise GridParseError("expected 'edge <id> <id>'", lineno)
            try:
                u, v = int(parts[1]), int(parts[2])
            except ValueError:
                raise GridParseError(f"bad edge endpoints {parts[1:]!r}", lineno) from None
            if u == v:
                raise GridParseError(f"self-loop edge at node {u}", lineno)
            raw_edges.append((u, v, lineno))
        else:
            raise GridParseError(f"unknown directive {parts[0]!r}", lineno)

    for u, v, lineno in raw_edges:
        for end in (u, v):
            if end not in roles:
                raise GridParseError(f"edge references undeclared node {end}", lineno)

    return GridNetwork(
        nodes=tuple(sorted(roles)),
        edges=frozenset(norm_edge(u, v) for u, v, _ in raw_edges),
        sources=frozenset(i for i, r in roles.items() if r in ("S", "SL")),
        loads=frozenset(i for i, r in roles.items() if r in ("L", "SL")),
    )


def serialize_network(g: GridNetwork) -> str:
    """Render a network in the grid file format (inverse of load_network)."""
    lines = []
    for i in g.nodes:
        src, ld = i in g.sources, i in g.loads
        role = "SL" if src and ld else "S" if src else "L" if ld else "T"
        lines.append(f"node {i} {role}")
    for u, v in sorted(g.edges):
        lines.append(f"edge {u} {v}")
    return "\n".join(lines) + "\n"


def remove_nodes(g: GridNetwork, remove: Iterable[int]) -> GridNetwork:
    """Subgraph without the given nodes and every edge adjacent to them.

    Ids absent from g are ignored; survivor role flags are unchanged.
    """
    gone = frozenset(remove)
    if not gone:
        return g
    keep = tuple(i for i in g.nodes if i not in gone)
    return GridNetwork(
        nodes=keep,
        edges=frozenset(e for e in g.edges if e[0] not in gone and e[1] not in gone),
        sources=g.sources - gone,
        loads=g.loads - gone,
    )


def bfs_distances(g: GridNetwork, root: int) -> dict[int, int]:
    """Unweighted hop distances from root to every reachable node."""
    dist = {root: 0}
    frontier = [root]
    while frontier:
        nxt = []
        for u in frontier:
            du = dist[u]
            for w in g.neighbors(u):
                if w not in dist:
                    dist[w] = du + 1
                    nxt.append(w)
        frontier = nxt
    return dist


def nearest_sources(g: GridNetwork, i: int) -> frozenset[int]:
    """All sources other than i at minimum hop distance from i.

    Empty when no other source is reachable.
    """
    if not g.has_node(i):
        raise ValueError(f"unknown node id {i}")
    dist = bfs_distances(g, i)
    best: int | None = None
    found: list[int] = []
    for s in g.sources:
        if s == i or s not in dist:
            continue
        d = dist[s]
        if best is None or d < best:
            best, found = d, [s]
        elif d == best:
            found.append(s)
    return frozenset(found)


def disc(g: GridNetwork, all_loads: Iterable[int]) -> int:
    """Number of original loads with no reachable serving source in g.

    A load absent from g counts as disconnected; a node that is both source
    and load is only served by a different reachable source.
    """
    count = 0
    for t in all_loads:
        if not g.has_node(t) or not nearest_sources(g, t):
            count += 1
    return count


def generate_synthetic(
    n: int, m: int, src_frac: float, ld_frac: float, seed: int
) -> GridNetwork:
    """Connected random grid: random spanning tree plus random extra edges.

    Roles are sampled deterministically from the seed, with at least one
    source and one load and disjoint role sets. Identical inputs yield an
    identical network.
    """
    if n < 2:
        raise ValueError("need at least 2 nodes")
    max_edges = n * (n - 1) // 2
    if m > max_edges:
        raise ValueError(f"{m} edges infeasible for {n} nodes (max {max_edges})")
    if m < n - 1:
        raise ValueError(f"{m} edges cannot connect {n} nodes")
    if src_frac <= 0 or ld_frac <= 0 or src_frac + ld_frac > 1:
        raise ValueError("role fractions must be positive and sum to at most 1")

    rng = random.Random(seed)
    order = list(range(n))
    rng.shuffle(order)
    edges: set[Edge] = set()
    for k in range(1, n):
        edges.add(norm_edge(order[k], order[rng.randrange(k)]))
    spare = [e for e in combinations(range(n), 2) if e not in edges]
    rng.shuffle(spare)
    edges.update(spare[: m - len(edges)])

    n_src = max(1, round(src_frac * n))
    n_ld = max(1, min(round(ld_frac * n), n - n_src))
    picks = rng.sample(range(n), n_src + n_ld)
    return GridNetwork(
        nodes=tuple(range(n)),
        edges=frozenset(edges),
        sources=frozenset(picks[:n_src]),
        loads=frozenset(picks[n_src:]),
    )


@dataclass(frozen=True)
class ReductionInstance:
    """A generated game instance together with its reduction parameters."""

    network: GridNetwork
    k_a: int
    k_d: int
    alpha: float


def generate_set_cover_instance(
    subsets: Sequence[Iterable], ground: Iterable, k: int
) -> ReductionInstance:
    """Bipartite set-cover embedding: one source per subset, one load per element.

    Source v_h and load v_s are adjacent iff element s belongs to subset h.
    Budgets and margin follow the embedding: the attacker gets one unit per
    subset, the defender k, and the margin is large enough that no cascade
    ever triggers.
    """
    fams = [frozenset(h) for h in subsets]
    elements = sorted(set(ground), key=repr)
    if not fams:
        raise ValueError("need at least one subset")
    for s in elements:
        if not any(s in h for h in fams):
            raise ValueError(f"element {s!r} not covered by any subset")
    n_h = len(fams)
    elem_id = {s: n_h + j for j, s in enumerate(elements)}
    edges = {
        norm_edge(i, elem_id[s]) for i, h in enumerate(fams) for s in h if s in elem_id
    }
    network = GridNetwork(
        nodes=tuple(range(n_h + len(elements))),
        edges=frozenset(edges),
        sources=frozenset(range(n_h)),
        loads=frozenset(elem_id.values()),
    )
    return ReductionInstance(network, k_a=n_h, k_d=k, alpha=float(n_h + len(elements)))


def generate_vertex_cover_instance(
    nodes: Iterable[int], edges: Iterable[tuple[int, int]], k: int
) -> ReductionInstance:
    """Vertex-cover embedding: same graph, every node both source and load.

    The attacker gets budget k against an empty defense; the margin equals the
    edge count so cascades never trigger.
    """
    edge_set = set()
    for u, v in edges:
        if u == v:
            raise ValueError(f"self-loop at node {u} not allowed")
        edge_set.add(norm_edge(u, v))
    node_tuple = tuple(sorted(set(nodes) | {i for e in edge_set for i in e}))
    network = GridNetwork(
        nodes=node_tuple,
        edges=frozenset(edge_set),
        sources=frozenset(node_tuple),
        loads=frozenset(node_tuple),
    )
    return ReductionInstance(network, k_a=k, k_d=0, alpha=float(len(edge_set)))
