"""Restricted matrix-game LPs, the double-oracle loop, and full enumeration.

The zero-sum game is solved over restricted strategy sets that grow by best
responses until both responses are already present (or an iteration cap is
hit). Full enumeration over all budget-feasible subsets provides the exact
ground truth on small instances.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Literal

import numpy as np
from scipy.optimize import linprog

from .cascade import CapacityMap, PayoffCache
from .errors import CapacityLimitError
from .grid import GridNetwork
from .strategy import (
    MixedStrategy,
    PureStrategy,
    all_subsets,
    exact_best_response,
    greedy_attacker_response,
    greedy_defender_response,
    subset_count,
)

VALUE_GAP_TOL = 1e-9
STALL_TOL = 1e-12
FULL_ENUMERATION_MAX_ENTRIES = 250_000

OracleKind = Literal["exact", "greedy"]


@dataclass(frozen=True)
class PayoffMatrix:
    """Payoffs over ordered attack and defense option lists."""

    attacks: tuple[PureStrategy, ...]
    defenses: tuple[PureStrategy, ...]
    values: np.ndarray  # shape (len(attacks), len(defenses))


def build_payoff_matrix(
    cache: PayoffCache,
    attacks: list[PureStrategy] | tuple[PureStrategy, ...],
    defenses: list[PureStrategy] | tuple[PureStrategy, ...],
) -> PayoffMatrix:
    values = np.empty((len(attacks), len(defenses)))
    for i, atk in enumerate(attacks):
        for j, dfd in enumerate(defenses):
            values[i, j] = cache.payoff(atk.nodes, dfd.nodes)
    return PayoffMatrix(tuple(attacks), tuple(defenses), values)


def _mix_from_probs(
    options: tuple[PureStrategy, ...], probs: np.ndarray
) -> MixedStrategy:
    probs = np.clip(probs, 0.0, None)
    keep = probs > 1e-12
    kept = probs[keep] / probs[keep].sum()
    return MixedStrategy(
        tuple(
            (opt, float(p))
            for opt, p in zip(
                [o for o, k in zip(options, keep) if k], kept, strict=True
            )
        )
    )


def solve_restricted_defender(m: PayoffMatrix) -> tuple[float, MixedStrategy]:
    """Minimize the maximum expected payoff over the restricted defense set.

    Variables are one probability per defense option plus the value bound.
    Any optimal vertex is acceptable; only the value is unique.
    """
    n_atk, n_def = m.values.shape
    if n_atk == 0 or n_def == 0:
        raise ValueError("payoff matrix must be non-empty in both dimensions")
    c = np.zeros(n_def + 1)
    c[-1] = 1.0  # minimize the bound p*
    a_ub = np.hstack([m.values, -np.ones((n_atk, 1))])
    a_eq = np.hstack([np.ones((1, n_def)), np.zeros((1, 1))])
    bounds = [(0.0, 1.0)] * n_def + [(None, None)]
    res = linprog(
        c, A_ub=a_ub, b_ub=np.zeros(n_atk), A_eq=a_eq, b_eq=[1.0],
        bounds=bounds, method="highs",
    )
    if res.status != 0:
        raise RuntimeError(f"defender LP failed: {res.message}")
    value = float(res.x[-1])
    if -VALUE_GAP_TOL < value <= 0.0:
        value = 0.0
    return value, _mix_from_probs(m.defenses, res.x[:-1])


def solve_restricted_attacker(m: PayoffMatrix) -> tuple[float, MixedStrategy]:
    """Maximize the minimum expected payoff over the restricted attack set."""
    n_atk, n_def = m.values.shape
    if n_atk == 0 or n_def == 0:
        raise ValueError("payoff matrix must be non-empty in both dimensions")
    c = np.zeros(n_atk + 1)
    c[-1] = -1.0  # maximize the bound
    a_ub = np.hstack([-m.values.T, np.ones((n_def, 1))])
    a_eq = np.hstack([np.ones((1, n_atk)), np.zeros((1, 1))])
    bounds = [(0.0, 1.0)] * n_atk + [(None, None)]
    res = linprog(
        c, A_ub=a_ub, b_ub=np.zeros(n_def), A_eq=a_eq, b_eq=[1.0],
        bounds=bounds, method="highs",
    )
    if res.status != 0:
        raise RuntimeError(f"attacker LP failed: {res.message}")
    value = float(res.x[-1])
    if -VALUE_GAP_TOL < value <= 0.0:
        value = 0.0
    return value, _mix_from_probs(m.attacks, res.x[:-1])


@dataclass(frozen=True)
class IterationStats:
    iteration: int
    restricted_value: float
    attacker_response_value: float
    defender_response_value: float
    wall_seconds: float


@dataclass(frozen=True)
class GameSolution:
    """Game value, both minimax mixes, and solver diagnostics."""

    value: float
    attacker_mix: MixedStrategy
    defender_mix: MixedStrategy
    iterations: int
    converged: bool
    stats: tuple[IterationStats, ...] = ()


def double_oracle(
    g0: GridNetwork,
    caps: CapacityMap,
    k_a: int,
    k_d: int,
    max_iters: int = 200,
    oracle_kind: OracleKind = "exact",
    cache: PayoffCache | None = None,
) -> GameSolution:
    """Grow restricted strategy sets by best responses until closure.

    Each round solves both restricted LPs, computes each side's best response
    to the opponent's current mix, and terminates when both responses are
    already known (or the value gap between the responses closes within
    tolerance). With exact oracles and enough iterations the result is the
    true game value. Greedy oracles additionally stop, unconverged, when the
    restricted value stalls for three consecutive rounds.
    """
    if max_iters < 1:
        raise ValueError("max_iters must be at least 1")
    if cache is None:
        cache = PayoffCache(g0, caps)

    attacks = [PureStrategy(frozenset(), k_a)]
    defenses = [PureStrategy(frozenset(), k_d)]
    known_attacks = {attacks[0].nodes}
    known_defenses = {defenses[0].nodes}

    def best_response(opponent: MixedStrategy, budget: int, side) -> PureStrategy:
        if oracle_kind == "exact":
            return exact_best_response(g0, caps, opponent, budget, side, cache=cache)
        if side == "attacker":
            return greedy_attacker_response(g0, caps, opponent, budget, cache=cache)
        return greedy_defender_response(g0, caps, opponent, budget, cache=cache)

    stats: list[IterationStats] = []
    value = 0.0
    atk_mix = MixedStrategy.pure(attacks[0])
    def_mix = MixedStrategy.pure(defenses[0])
    converged = False
    recent_values: list[float] = []

    for iteration in range(1, max_iters + 1):
        started = time.perf_counter()
        matrix = build_payoff_matrix(cache, attacks, defenses)
        value, def_mix = solve_restricted_defender(matrix)
        _, atk_mix = solve_restricted_attacker(matrix)

        atk_resp = best_response(def_mix, k_a, "attacker")
        def_resp = best_response(atk_mix, k_d, "defender")
        atk_value = sum(
            p * cache.payoff(atk_resp.nodes, dfd.nodes) for dfd, p in def_mix.support
        )
        def_value = sum(
            p * cache.payoff(atk.nodes, def_resp.nodes) for atk, p in atk_mix.support
        )
        stats.append(
            IterationStats(
                iteration=iteration,
                restricted_value=value,
                attacker_response_value=atk_value,
                defender_response_value=def_value,
                wall_seconds=time.perf_counter() - started,
            )
        )

        both_known = atk_resp.nodes in known_attacks and def_resp.nodes in known_defenses
        if both_known or atk_value - def_value <= VALUE_GAP_TOL:
            converged = True
            break
        if atk_resp.nodes not in known_attacks:
            known_attacks.add(atk_resp.nodes)
            attacks.append(atk_resp)
        if def_resp.nodes not in known_defenses:
            known_defenses.add(def_resp.nodes)
            defenses.append(def_resp)

        recent_values.append(value)
        if (
            oracle_kind == "greedy"
            and len(recent_values) >= 3
            and max(recent_values[-3:]) - min(recent_values[-3:]) <= STALL_TOL
        ):
            break

    return GameSolution(
        value=value,
        attacker_mix=atk_mix,
        defender_mix=def_mix,
        iterations=len(stats),
        converged=converged,
        stats=tuple(stats),
    )


def solve_full_enumeration(
    g0: GridNetwork,
    caps: CapacityMap,
    k_a: int,
    k_d: int,
    max_entries: int = FULL_ENUMERATION_MAX_ENTRIES,
    cache: PayoffCache | None = None,
) -> GameSolution:
    """Exact solve over the complete budget-feasible strategy spaces."""
    n = g0.num_nodes
    entries = subset_count(n, k_a) * subset_count(n, k_d)
    if entries > max_entries:
        raise CapacityLimitError(
            f"full enumeration needs {entries} matrix entries, limit is "
            f"{max_entries}; use double_oracle instead"
        )
    if cache is None:
        cache = PayoffCache(g0, caps)
    attacks = [PureStrategy(frozenset(c), k_a) for c in all_subsets(g0.nodes, k_a)]
    defenses = [PureStrategy(frozenset(c), k_d) for c in all_subsets(g0.nodes, k_d)]
    matrix = build_payoff_matrix(cache, attacks, defenses)
    value, def_mix = solve_restricted_defender(matrix)
    _, atk_mix = solve_restricted_attacker(matrix)
    return GameSolution(
        value=value,
        attacker_mix=atk_mix,
        defender_mix=def_mix,
        iterations=1,
        converged=True,
        stats=(),
    )
