"""Service handlers: one pure function per operation, request model in,
response model out. The FastAPI app and the CLI both call these.

Handlers raise ValueError for bad inputs and CapacityLimitError when an
exhaustive oracle would blow the enumeration limit; transports map those to
status codes (HTTP 400 / 409) or exit codes (2 / 3).
"""

from __future__ import annotations

import time

from .. import cascade, game, strategy
from ..grid import (
    GridNetwork,
    generate_synthetic,
    load_network,
    remove_nodes,
    serialize_network,
)
from .schemas import (
    CascadeRound,
    EdgeLoadRow,
    GenerateRequest,
    GenerateResponse,
    GridSource,
    IterationRow,
    LoadsRequest,
    LoadsResponse,
    MixEntry,
    NodeLoadRow,
    RespondRequest,
    RespondResponse,
    SimulateRequest,
    SimulateResponse,
    SolveRequest,
    SolveResponse,
    SweepRequest,
    SweepResponse,
    SweepRow,
)


def resolve_grid(source: GridSource) -> GridNetwork:
    if source.text is not None:
        return load_network(source.text)
    spec = source.synthetic
    return generate_synthetic(spec.n, spec.m, spec.src_frac, spec.ld_frac, spec.seed)


def _mix_from_entries(entries: list[MixEntry]) -> strategy.MixedStrategy:
    return strategy.MixedStrategy(
        tuple(
            (strategy.PureStrategy(frozenset(e.nodes), len(e.nodes)), e.probability)
            for e in entries
        )
    )


def _mix_to_entries(mix: strategy.MixedStrategy) -> list[MixEntry]:
    return [
        MixEntry(nodes=list(strat.sorted_nodes), probability=prob)
        for strat, prob in mix.support
    ]


def handle_simulate(req: SimulateRequest) -> SimulateResponse:
    started = time.perf_counter()
    g0 = resolve_grid(req.grid)
    caps = cascade.capacities(g0, req.alpha)
    attack, defend = frozenset(req.attack), frozenset(req.defend)
    stray = (attack | defend) - set(g0.nodes)
    if stray:
        raise ValueError(f"strategy nodes not in network: {sorted(stray)}")
    trace = cascade.cascade_fixpoint(remove_nodes(g0, attack - defend), caps)
    value = cascade.disc(trace.final, g0.loads)
    return SimulateResponse(
        payoff=value,
        num_rounds=trace.num_rounds,
        rounds=[
            CascadeRound(round=i + 1, removed_edges=sorted(removed))
            for i, removed in enumerate(trace.rounds)
        ],
        wall_seconds=time.perf_counter() - started if req.timings else None,
    )


def handle_loads(req: LoadsRequest) -> LoadsResponse:
    started = time.perf_counter()
    g0 = resolve_grid(req.grid)
    caps = cascade.capacities(g0, req.alpha)
    cache = cascade.PayoffCache(g0, caps)
    nodal = cascade.nodal_loads(g0)
    per_edge = cascade.edge_loads(g0)
    return LoadsResponse(
        nodes=[
            NodeLoadRow(
                node=i,
                nodal_load=nodal[i],
                single_attack_payoff=cache.payoff(frozenset({i})),
            )
            for i in g0.nodes
        ],
        edges=[
            EdgeLoadRow(u=u, v=v, load=per_edge[(u, v)])
            for u, v in sorted(per_edge)
        ],
        wall_seconds=time.perf_counter() - started if req.timings else None,
    )


def handle_respond(req: RespondRequest) -> RespondResponse:
    started = time.perf_counter()
    g0 = resolve_grid(req.grid)
    caps = cascade.capacities(g0, req.alpha)
    cache = cascade.PayoffCache(g0, caps)
    opponent = _mix_from_entries(req.opponent)
    if req.oracle == "exact":
        resp = strategy.exact_best_response(
            g0, caps, opponent, req.budget, req.side, cache=cache
        )
    elif req.side == "attacker":
        resp = strategy.greedy_attacker_response(
            g0, caps, opponent, req.budget, cache=cache
        )
    else:
        resp = strategy.greedy_defender_response(
            g0, caps, opponent, req.budget, cache=cache
        )
    if req.side == "attacker":
        value = strategy.expected_payoff(
            g0, caps, strategy.MixedStrategy.pure(resp), opponent, cache=cache
        )
    else:
        value = strategy.expected_payoff(
            g0, caps, opponent, strategy.MixedStrategy.pure(resp), cache=cache
        )
    return RespondResponse(
        side=req.side,
        nodes=list(resp.sorted_nodes),
        value=value,
        wall_seconds=time.perf_counter() - started if req.timings else None,
    )


def handle_solve(req: SolveRequest) -> SolveResponse:
    started = time.perf_counter()
    g0 = resolve_grid(req.grid)
    caps = cascade.capacities(g0, req.alpha)
    solution = game.double_oracle(
        g0, caps, req.ka, req.kd, max_iters=req.max_iters, oracle_kind=req.oracle
    )
    return SolveResponse(
        value=solution.value,
        converged=solution.converged,
        iterations=solution.iterations,
        attacker_mix=_mix_to_entries(solution.attacker_mix),
        defender_mix=_mix_to_entries(solution.defender_mix),
        iteration_stats=[
            IterationRow(
                iteration=s.iteration,
                restricted_value=s.restricted_value,
                attacker_response_value=s.attacker_response_value,
                defender_response_value=s.defender_response_value,
                wall_seconds=s.wall_seconds if req.timings else None,
            )
            for s in solution.stats
        ],
        wall_seconds=time.perf_counter() - started if req.timings else None,
    )


def handle_sweep(req: SweepRequest) -> SweepResponse:
    """Evaluate the comparison metrics over the parameter grid.

    Per (alpha, ka, kd) point: the minimax game value, the minimax attack
    against the load-based defense, the best response against the load-based
    defense, and the uniform load-attack baseline (when the attack budget
    fits the load count). One payoff cache is shared per point.
    """
    started = time.perf_counter()
    g0 = resolve_grid(req.grid)
    rows: list[SweepRow] = []
    for alpha in req.alphas:
        caps = cascade.capacities(g0, alpha)
        cache = cascade.PayoffCache(g0, caps)
        for ka in req.ka_list:
            for kd in req.kd_list:
                point = dict(alpha=alpha, ka=ka, kd=kd)
                solution = game.double_oracle(
                    g0, caps, ka, kd,
                    max_iters=req.max_iters, oracle_kind=req.oracle, cache=cache,
                )
                rows.append(
                    SweepRow(
                        **point,
                        metric="game_value",
                        value=solution.value,
                        iterations=solution.iterations,
                        converged=solution.converged,
                    )
                )
                dlb = strategy.dlb_defense(g0, kd)
                dlb_mix = strategy.MixedStrategy.pure(dlb)
                rows.append(
                    SweepRow(
                        **point,
                        metric="dlb_vs_minimax",
                        value=strategy.expected_payoff(
                            g0, caps, solution.attacker_mix, dlb_mix, cache=cache
                        ),
                    )
                )
                if req.oracle == "exact":
                    br = strategy.exact_best_response(
                        g0, caps, dlb_mix, ka, "attacker", cache=cache
                    )
                else:
                    br = strategy.greedy_attacker_response(
                        g0, caps, dlb_mix, ka, cache=cache
                    )
                rows.append(
                    SweepRow(
                        **point,
                        metric="dlb_vs_best_response",
                        value=strategy.expected_payoff(
                            g0, caps, strategy.MixedStrategy.pure(br), dlb_mix,
                            cache=cache,
                        ),
                    )
                )
                if ka <= len(g0.loads):
                    uniform = strategy.uniform_load_attack(g0, ka, seed=req.seed)
                    if req.oracle == "exact":
                        best_def = strategy.exact_best_response(
                            g0, caps, uniform, kd, "defender", cache=cache
                        )
                    else:
                        best_def = strategy.greedy_defender_response(
                            g0, caps, uniform, kd, cache=cache
                        )
                    rows.append(
                        SweepRow(
                            **point,
                            metric="uniform_baseline",
                            value=strategy.expected_payoff(
                                g0, caps, uniform,
                                strategy.MixedStrategy.pure(best_def), cache=cache,
                            ),
                        )
                    )
    return SweepResponse(
        rows=rows,
        wall_seconds=time.perf_counter() - started if req.timings else None,
    )


def handle_generate(req: GenerateRequest) -> GenerateResponse:
    g0 = generate_synthetic(req.n, req.m, req.src_frac, req.ld_frac, req.seed)
    return GenerateResponse(grid_text=serialize_network(g0))
