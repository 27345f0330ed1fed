"""Independent brute-force oracles used only by the tests.

Loads are recomputed here by literally enumerating every shortest path, so
nothing is shared with the package's BFS/path-counting implementation. The
cover solvers are plain exhaustive search.
"""

from __future__ import annotations

from collections import deque
from itertools import combinations

from gridgame.grid import GridNetwork, norm_edge


def _distances(g: GridNetwork, root: int) -> dict[int, int]:
    dist = {root: 0}
    queue = deque([root])
    while queue:
        u = queue.popleft()
        for w in g.neighbors(u):
            if w not in dist:
                dist[w] = dist[u] + 1
                queue.append(w)
    return dist


def enumerate_shortest_paths(g: GridNetwork, s: int, t: int) -> list[list[int]]:
    """All shortest s-t paths as explicit node sequences."""
    dist = _distances(g, s)
    if t not in dist:
        return []
    paths: list[list[int]] = []

    def walk(node: int, acc: list[int]):
        if node == s:
            paths.append(list(reversed(acc)))
            return
        for w in g.neighbors(node):
            if dist.get(w, -1) == dist[node] - 1:
                acc.append(w)
                walk(w, acc)
                acc.pop()

    walk(t, [t])
    return paths


def oracle_nearest_sources(g: GridNetwork, i: int) -> frozenset[int]:
    dist = _distances(g, i)
    candidates = {s: dist[s] for s in g.sources if s != i and s in dist}
    if not candidates:
        return frozenset()
    best = min(candidates.values())
    return frozenset(s for s, d in candidates.items() if d == best)


def oracle_disc(g: GridNetwork, all_loads) -> int:
    return sum(
        1
        for t in all_loads
        if not g.has_node(t) or not oracle_nearest_sources(g, t)
    )


def oracle_edge_loads(g: GridNetwork) -> dict[tuple[int, int], float]:
    result = {e: 0.0 for e in g.edges}
    for t in sorted(g.loads):
        near = oracle_nearest_sources(g, t)
        if not near:
            continue
        weight = 1.0 / len(near)
        for s in sorted(near):
            paths = enumerate_shortest_paths(g, s, t)
            sigma = len(paths)
            for path in paths:
                for a, b in zip(path, path[1:]):
                    result[norm_edge(a, b)] += weight / sigma
    return result


def oracle_nodal_loads(g: GridNetwork) -> dict[int, float]:
    result = {i: 0.0 for i in g.nodes}
    for s in sorted(g.sources):
        for t in sorted(g.loads):
            if s == t:
                continue
            paths = enumerate_shortest_paths(g, s, t)
            if not paths:
                continue
            sigma = len(paths)
            for path in paths:
                for i in path[1:-1]:
                    result[i] += 1.0 / sigma
    return result


def has_set_cover(subsets: list[frozenset], ground: set, k: int) -> bool:
    """Exhaustive: can k or fewer of the subsets cover the ground set?"""
    for size in range(min(k, len(subsets)) + 1):
        for combo in combinations(range(len(subsets)), size):
            union = set()
            for idx in combo:
                union |= subsets[idx]
            if ground <= union:
                return True
    return False


def has_vertex_cover(nodes, edges, k: int) -> bool:
    """Exhaustive: is there a set of at most k nodes touching every edge?"""
    nodes = sorted(nodes)
    edges = list(edges)
    for size in range(min(k, len(nodes)) + 1):
        for combo in combinations(nodes, size):
            chosen = set(combo)
            if all(u in chosen or v in chosen for u, v in edges):
                return True
    return False
