"""Strategies, expected payoff, and deterministic best-response computation.

Both players pick node subsets within a budget; mixed strategies are
probability distributions over such subsets. Best responses come in three
flavors: the load-ranked defense (cheap, no opponent model), the greedy
marginal heuristics, and exhaustive enumeration (exact, guarded by a subset
count limit). All tie-breaking is by smallest node id / lexicographically
smallest set so results are reproducible.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations
from math import comb
from typing import Iterable, Literal

from .cascade import CapacityMap, PayoffCache, nodal_loads
from .errors import CapacityLimitError
from .grid import GridNetwork

PROB_TOL = 1e-9

# Guard for exhaustive subset enumeration; beyond this the greedy oracles
# are the supported path.
ENUMERATION_LIMIT = 100_000
UNIFORM_SAMPLE_SIZE = 1000

Side = Literal["attacker", "defender"]


@dataclass(frozen=True)
class PureStrategy:
    """A node subset within a budget."""

    nodes: frozenset[int]
    budget: int

    def __post_init__(self):
        if self.budget < 0:
            raise ValueError("budget must be non-negative")
        if len(self.nodes) > self.budget:
            raise ValueError(
                f"strategy has {len(self.nodes)} nodes, budget is {self.budget}"
            )

    @property
    def sorted_nodes(self) -> tuple[int, ...]:
        return tuple(sorted(self.nodes))


@dataclass(frozen=True)
class MixedStrategy:
    """Probability distribution over pure strategies with distinct node sets."""

    support: tuple[tuple[PureStrategy, float], ...]

    def __post_init__(self):
        total = 0.0
        seen: set[frozenset[int]] = set()
        for strat, prob in self.support:
            if prob < -PROB_TOL or prob > 1 + PROB_TOL:
                raise ValueError(f"probability {prob} outside [0, 1]")
            if strat.nodes in seen:
                raise ValueError(f"duplicate support set {sorted(strat.nodes)}")
            seen.add(strat.nodes)
            total += prob
        if abs(total - 1.0) > PROB_TOL:
            raise ValueError(f"probabilities sum to {total}, expected 1")

    @classmethod
    def pure(cls, strategy: PureStrategy) -> "MixedStrategy":
        return cls(((strategy, 1.0),))

    @classmethod
    def of_sets(
        cls, entries: Iterable[tuple[Iterable[int], float]], budget: int
    ) -> "MixedStrategy":
        return cls(
            tuple(
                (PureStrategy(frozenset(nodes), budget), prob)
                for nodes, prob in entries
            )
        )

    @property
    def size(self) -> int:
        return len(self.support)

    def node_union(self) -> frozenset[int]:
        out: frozenset[int] = frozenset()
        for strat, _ in self.support:
            out |= strat.nodes
        return out


def expected_payoff(
    g0: GridNetwork,
    caps: CapacityMap,
    pr_a: MixedStrategy,
    pr_d: MixedStrategy,
    cache: PayoffCache | None = None,
) -> float:
    """Probability-weighted payoff over the support product."""
    if cache is None:
        cache = PayoffCache(g0, caps)
    total = 0.0
    for atk, pa in pr_a.support:
        for dfd, pd in pr_d.support:
            total += pa * pd * cache.payoff(atk.nodes, dfd.nodes)
    return total


def _expected_vs_mix(
    cache: PayoffCache, opponent: MixedStrategy, nodes: frozenset[int], side: Side
) -> float:
    """Expected payoff of a pure node set against the opponent's mix."""
    total = 0.0
    if side == "defender":
        for atk, p in opponent.support:
            total += p * cache.payoff(atk.nodes, nodes)
    else:
        for dfd, p in opponent.support:
            total += p * cache.payoff(nodes, dfd.nodes)
    return total


def dlb_defense(g0: GridNetwork, k_d: int) -> PureStrategy:
    """Defend the k_d nodes with the highest nodal load, ties to smallest id."""
    if k_d > g0.num_nodes:
        raise ValueError(f"defense budget {k_d} exceeds {g0.num_nodes} nodes")
    loads = nodal_loads(g0)
    ranked = sorted(g0.nodes, key=lambda i: (-loads[i], i))
    return PureStrategy(frozenset(ranked[:k_d]), k_d)


def greedy_defender_response(
    g0: GridNetwork,
    caps: CapacityMap,
    pr_a: MixedStrategy,
    k_d: int,
    cache: PayoffCache | None = None,
) -> PureStrategy:
    """Greedy defense: repeatedly add the node cutting expected payoff most.

    Zero-gain additions are accepted; the loop stops at the budget, when the
    attacker's expected payoff reaches zero, or when every candidate would
    strictly raise it. Two provably-optimal cases short-circuit the loop:
    a single deterministic attack within budget is simply defended outright,
    and against all-singleton attacks the defense is the top-k_d nodes by
    probability-weighted single-attack damage.
    """
    if cache is None:
        cache = PayoffCache(g0, caps)

    if pr_a.size == 1 and len(pr_a.support[0][0].nodes) <= k_d:
        return PureStrategy(pr_a.support[0][0].nodes, k_d)

    if all(len(s.nodes) == 1 for s, _ in pr_a.support):
        base = cache.payoff(frozenset())
        gains = []
        for strat, prob in pr_a.support:
            (v,) = strat.nodes
            gain = prob * (cache.payoff(strat.nodes) - base)
            if gain >= 0:
                gains.append((-gain, v))
        gains.sort()
        return PureStrategy(frozenset(v for _, v in gains[:k_d]), k_d)

    chosen: set[int] = set()
    candidates = [i for i in g0.nodes]
    while len(chosen) < k_d:
        current = _expected_vs_mix(cache, pr_a, frozenset(chosen), "defender")
        if current == 0:
            break
        best_node, best_gain = None, 0.0
        for i in candidates:
            if i in chosen:
                continue
            gain = current - _expected_vs_mix(
                cache, pr_a, frozenset(chosen | {i}), "defender"
            )
            if gain > best_gain or (gain == best_gain and best_node is None):
                best_node, best_gain = i, gain
        if best_node is None:
            break
        chosen.add(best_node)
    return PureStrategy(frozenset(chosen), k_d)


def greedy_attacker_response(
    g0: GridNetwork,
    caps: CapacityMap,
    pr_d: MixedStrategy,
    k_a: int,
    cache: PayoffCache | None = None,
) -> PureStrategy:
    """Greedy attack: repeatedly add the node raising expected payoff most.

    Stops at the budget, when every original load is already disconnected
    under all defenses in the mix, or when no candidate helps.
    """
    if cache is None:
        cache = PayoffCache(g0, caps)
    max_payoff = float(len(g0.loads))
    chosen: set[int] = set()
    while len(chosen) < k_a:
        current = _expected_vs_mix(cache, pr_d, frozenset(chosen), "attacker")
        if current >= max_payoff:
            break
        best_node, best_gain = None, 0.0
        for i in g0.nodes:
            if i in chosen:
                continue
            gain = (
                _expected_vs_mix(cache, pr_d, frozenset(chosen | {i}), "attacker")
                - current
            )
            if gain > best_gain or (gain == best_gain and best_node is None):
                best_node, best_gain = i, gain
        if best_node is None:
            break
        chosen.add(best_node)
    return PureStrategy(frozenset(chosen), k_a)


def subset_count(n: int, budget: int) -> int:
    return sum(comb(n, j) for j in range(min(budget, n) + 1))


def all_subsets(nodes: Iterable[int], budget: int):
    ordered = sorted(nodes)
    for size in range(min(budget, len(ordered)) + 1):
        yield from combinations(ordered, size)


def exact_best_response(
    g0: GridNetwork,
    caps: CapacityMap,
    opponent: MixedStrategy,
    budget: int,
    side: Side,
    cache: PayoffCache | None = None,
    limit: int = ENUMERATION_LIMIT,
) -> PureStrategy:
    """Optimal response by exhaustive enumeration of all sets within budget.

    Guarded by a subset-count limit; ties resolve to the lexicographically
    smallest set. This is the correctness oracle for the greedy heuristics
    and the exact oracle inside the double-oracle solver.
    """
    count = subset_count(g0.num_nodes, budget)
    if count > limit:
        raise CapacityLimitError(
            f"{count} candidate sets exceed the enumeration limit {limit}; "
            "use the greedy oracle instead"
        )
    if cache is None:
        cache = PayoffCache(g0, caps)
    best_set: tuple[int, ...] | None = None
    best_value = 0.0
    for candidate in all_subsets(g0.nodes, budget):
        value = _expected_vs_mix(cache, opponent, frozenset(candidate), side)
        if best_set is None:
            best_set, best_value = candidate, value
            continue
        better = value > best_value if side == "attacker" else value < best_value
        if better or (value == best_value and candidate < best_set):
            best_set, best_value = candidate, value
    assert best_set is not None
    return PureStrategy(frozenset(best_set), budget)


def uniform_load_attack(
    g0: GridNetwork,
    k_a: int,
    limit: int = ENUMERATION_LIMIT,
    sample_size: int = UNIFORM_SAMPLE_SIZE,
    seed: int = 0,
) -> MixedStrategy:
    """Uniform distribution over all k_a-subsets of load nodes.

    When the number of subsets exceeds the limit, a seeded sample of distinct
    subsets with uniform weights stands in for the exact distribution.
    """
    loads = sorted(g0.loads)
    if k_a > len(loads):
        raise ValueError(f"attack budget {k_a} exceeds {len(loads)} load nodes")
    total = comb(len(loads), k_a)
    if total <= limit:
        prob = 1.0 / total
        return MixedStrategy(
            tuple(
                (PureStrategy(frozenset(c), k_a), prob)
                for c in combinations(loads, k_a)
            )
        )
    rng = random.Random(seed)
    picked: set[frozenset[int]] = set()
    while len(picked) < sample_size:
        picked.add(frozenset(rng.sample(loads, k_a)))
    prob = 1.0 / len(picked)
    return MixedStrategy(
        tuple(
            (PureStrategy(s, k_a), prob)
            for s in sorted(picked, key=lambda s: tuple(sorted(s)))
        )
    )
