"""Load computation, capacities, the cascading failure operator, and payoff.

Edge load follows the nearest-source convention: each load node spreads one
unit of demand equally over its closest sources, and every edge accumulates
the fraction of the corresponding shortest paths that cross it. Capacities
are frozen once on the initial network; a cascade round removes exactly the
edges whose recomputed load strictly exceeds their frozen capacity, and the
cascade is the fixed point of that operator.

Nodal load is a different quantity (used for ranking defenses): plain
betweenness restricted to source-load pairs, with no nearest-source filter
and no 1/|N| weight. Both conventions are intentional and must not be
unified.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .grid import Edge, GridNetwork, disc, remove_nodes


def shortest_path_counts(
    g: GridNetwork, root: int
) -> tuple[dict[int, int], dict[int, int]]:
    """BFS from root: hop distance and number of shortest paths per node."""
    dist = {root: 0}
    sigma = {root: 1}
    frontier = [root]
    while frontier:
        nxt = []
        for u in frontier:
            du, su = dist[u], sigma[u]
            for w in g.neighbors(u):
                if w not in dist:
                    dist[w] = du + 1
                    sigma[w] = 0
                    nxt.append(w)
                if dist[w] == du + 1:
                    sigma[w] += su
        frontier = nxt
    return dist, sigma


class _PathData:
    """Per-network cache of BFS distance/path-count data keyed by root."""

    def __init__(self, g: GridNetwork):
        self.g = g
        self._data: dict[int, tuple[dict[int, int], dict[int, int]]] = {}

    def at(self, root: int) -> tuple[dict[int, int], dict[int, int]]:
        if root not in self._data:
            self._data[root] = shortest_path_counts(self.g, root)
        return self._data[root]


def edge_loads(g: GridNetwork) -> dict[Edge, float]:
    """Nearest-source-weighted shortest-path load on every edge of g.

    Loads with no reachable serving source contribute nothing. Summation
    order is fixed (sorted loads, sources, edges) so results are
    bit-reproducible.
    """
    result = {e: 0.0 for e in g.edges}
    paths = _PathData(g)
    edges = sorted(g.edges)
    for t in sorted(g.loads):
        dist_t, sig_t = paths.at(t)
        best = min(
            (dist_t[s] for s in g.sources if s != t and s in dist_t), default=None
        )
        if best is None:
            continue
        near = sorted(s for s in g.sources if s != t and dist_t.get(s) == best)
        weight = 1.0 / len(near)
        for s in near:
            dist_s, sig_s = paths.at(s)
            total = sig_t[s]
            for e in edges:
                u, v = e
                if u not in dist_t or v not in dist_t or u not in dist_s or v not in dist_s:
                    continue
                crossing = 0
                if dist_t[u] + 1 + dist_s[v] == best:
                    crossing += sig_t[u] * sig_s[v]
                if dist_t[v] + 1 + dist_s[u] == best:
                    crossing += sig_t[v] * sig_s[u]
                if crossing:
                    result[e] += weight * crossing / total
    return result


def nodal_loads(g: GridNetwork) -> dict[int, float]:
    """Interior betweenness of every node over source-load pairs.

    Sums, over each ordered (source, load) pair with distinct reachable
    endpoints, the fraction of their shortest paths that pass through the
    node. Endpoints never count for their own pairs.
    """
    result = {i: 0.0 for i in g.nodes}
    paths = _PathData(g)
    interior = sorted(g.nodes)
    for s in sorted(g.sources):
        dist_s, sig_s = paths.at(s)
        for t in sorted(g.loads):
            if t == s or t not in dist_s:
                continue
            d_st = dist_s[t]
            total = sig_s[t]
            dist_t, sig_t = paths.at(t)
            for i in interior:
                if i == s or i == t or i not in dist_s or i not in dist_t:
                    continue
                if dist_s[i] + dist_t[i] == d_st:
                    result[i] += sig_s[i] * sig_t[i] / total
    return result


@dataclass(frozen=True)
class CapacityMap:
    """Per-edge capacities of the initial network, frozen for all cascades."""

    capacities: dict[Edge, float]
    alpha: float

    def __contains__(self, e: Edge) -> bool:
        return e in self.capacities

    def __getitem__(self, e: Edge) -> float:
        return self.capacities[e]


def capacities(g0: GridNetwork, alpha: float) -> CapacityMap:
    """Capacity (1 + alpha) times initial load for every edge of g0."""
    if alpha < 0:
        raise ValueError(f"capacity margin must be non-negative, got {alpha}")
    loads = edge_loads(g0)
    return CapacityMap({e: (1.0 + alpha) * x for e, x in loads.items()}, alpha)


def failure_step(g: GridNetwork, caps: CapacityMap) -> GridNetwork:
    """One synchronous failure round: drop every edge strictly over capacity.

    Equality survives; comparisons are exact, with no epsilon slack. Nodes
    are never removed by a failure round.
    """
    for e in g.edges:
        if e not in caps:
            raise ValueError(f"edge {e} has no capacity entry")
    loads = edge_loads(g)
    keep = frozenset(e for e in g.edges if loads[e] <= caps[e])
    if keep == g.edges:
        return g
    return GridNetwork(nodes=g.nodes, edges=keep, sources=g.sources, loads=g.loads)


@dataclass(frozen=True)
class CascadeTrace:
    """Round-by-round record of a cascade down to its fixed point."""

    rounds: tuple[frozenset[Edge], ...]
    final: GridNetwork

    @property
    def num_rounds(self) -> int:
        return len(self.rounds)


def cascade_fixpoint(g: GridNetwork, caps: CapacityMap) -> CascadeTrace:
    """Iterate failure rounds until nothing more fails."""
    rounds: list[frozenset[Edge]] = []
    current = g
    for _ in range(len(g.edges) + 1):
        nxt = failure_step(current, caps)
        removed = current.edges - nxt.edges
        if not removed:
            return CascadeTrace(tuple(rounds), current)
        rounds.append(frozenset(removed))
        current = nxt
    return CascadeTrace(tuple(rounds), current)  # edge set empty by now


def payoff(
    g0: GridNetwork,
    caps: CapacityMap,
    v_a: Iterable[int],
    v_d: Iterable[int],
) -> int:
    """Disconnected original loads after attacking undefended nodes and cascading.

    Only the effective removal set (attacked minus defended) matters.
    """
    attack, defend = frozenset(v_a), frozenset(v_d)
    node_set = set(g0.nodes)
    stray = (attack | defend) - node_set
    if stray:
        raise ValueError(f"strategy nodes not in network: {sorted(stray)}")
    effective = attack - defend
    trace = cascade_fixpoint(remove_nodes(g0, effective), caps)
    return disc(trace.final, g0.loads)


@dataclass
class PayoffCache:
    """Payoff evaluations memoized by effective removal set.

    Safe because the payoff depends only on the attacked-minus-defended set;
    shared by the expected-payoff machinery and the game matrix builder.
    """

    g0: GridNetwork
    caps: CapacityMap
    _cache: dict[frozenset[int], int] = field(default_factory=dict)

    def payoff(self, v_a: Iterable[int], v_d: Iterable[int] = ()) -> int:
        attack, defend = frozenset(v_a), frozenset(v_d)
        effective = attack - defend
        if effective not in self._cache:
            self._cache[effective] = payoff(self.g0, self.caps, attack, defend)
        else:
            stray = (attack | defend) - set(self.g0.nodes)
            if stray:
                raise ValueError(f"strategy nodes not in network: {sorted(stray)}")
        return self._cache[effective]

    @property
    def evaluations(self) -> int:
        return len(self._cache)
