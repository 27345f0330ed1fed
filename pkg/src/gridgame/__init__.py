"""Cascading-failure power-grid game.

Core pieces: the grid model and generators (grid), load/capacity/cascade
computation and payoff (cascade), strategies and best responses (strategy),
and the matrix-game / double-oracle solvers (game). A FastAPI service and a
thin-client CLI wrap the same handlers.
"""

from .cascade import (
    CapacityMap,
    CascadeTrace,
    PayoffCache,
    capacities,
    cascade_fixpoint,
    edge_loads,
    failure_step,
    nodal_loads,
    payoff,
)
from .errors import CapacityLimitError, GridParseError
from .game import (
    GameSolution,
    PayoffMatrix,
    build_payoff_matrix,
    double_oracle,
    solve_full_enumeration,
    solve_restricted_attacker,
    solve_restricted_defender,
)
from .grid import (
    GridNetwork,
    ReductionInstance,
    disc,
    generate_set_cover_instance,
    generate_synthetic,
    generate_vertex_cover_instance,
    load_network,
    make_network,
    nearest_sources,
    remove_nodes,
    serialize_network,
)
from .strategy import (
    MixedStrategy,
    PureStrategy,
    dlb_defense,
    exact_best_response,
    expected_payoff,
    greedy_attacker_response,
    greedy_defender_response,
    uniform_load_attack,
)

__version__ = "0.1.0"

__all__ = [
    "CapacityLimitError",
    "CapacityMap",
    "CascadeTrace",
    "GameSolution",
    "GridNetwork",
    "GridParseError",
    "MixedStrategy",
    "PayoffCache",
    "PayoffMatrix",
    "PureStrategy",
    "ReductionInstance",
    "build_payoff_matrix",
    "capacities",
    "cascade_fixpoint",
    "disc",
    "dlb_defense",
    "double_oracle",
    "edge_loads",
    "exact_best_response",
    "expected_payoff",
    "failure_step",
    "generate_set_cover_instance",
    "generate_synthetic",
    "generate_vertex_cover_instance",
    "greedy_attacker_response",
    "greedy_defender_response",
    "load_network",
    "make_network",
    "nearest_sources",
    "nodal_loads",
    "payoff",
    "remove_nodes",
    "serialize_network",
    "solve_full_enumeration",
    "solve_restricted_attacker",
    "solve_restricted_defender",
    "uniform_load_attack",
]
