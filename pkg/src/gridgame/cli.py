"""Command-line driver: a thin client over the service handlers.

Commands: simulate | loads | respond | solve | sweep | gen (plus serve, which
runs the HTTP service). Every command builds a request model, dispatches it
through the client (in-process by default, HTTP with --server), and renders
the response as CSV or JSON-lines rows. Output is byte-identical for
identical config and seed; wall-clock columns only appear with --timings.

Exit codes: 0 success, 2 usage/input error, 3 enumeration-capacity error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

from .client import run_request
from .errors import CapacityLimitError
from .service.schemas import (
    GenerateRequest,
    GridSource,
    LoadsRequest,
    MixEntry,
    RespondRequest,
    SimulateRequest,
    SolveRequest,
    SweepRequest,
    SyntheticSpec,
)

DEFAULTS = {
    "seed": 0,
    "alpha": 0.5,
    "ka": 1,
    "kd": 1,
    "oracle": "exact",
    "max_iters": 200,
    "format": "csv",
    "out": None,
    "timings": False,
    "server": None,
}


def _int_list(text: str) -> list[int]:
    text = text.strip()
    return [int(x) for x in text.split(",")] if text else []


def _float_list(text: str) -> list[float]:
    text = text.strip()
    return [float(x) for x in text.split(",")] if text else []


def _synthetic_spec(text: str, seed: int) -> SyntheticSpec:
    parts = text.split(",")
    if len(parts) != 4:
        raise ValueError(f"--synthetic wants N,M,SRC_FRAC,LD_FRAC, got {text!r}")
    return SyntheticSpec(
        n=int(parts[0]), m=int(parts[1]),
        src_frac=float(parts[2]), ld_frac=float(parts[3]), seed=seed,
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gridgame",
        description="Cascading-failure grid game: simulation, responses, solving",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser, grid: bool = True):
        if grid:
            src = p.add_mutually_exclusive_group()
            src.add_argument("--grid", help="grid file path")
            src.add_argument("--synthetic", help="N,M,SRC_FRAC,LD_FRAC generator spec")
        p.add_argument("--seed", type=int)
        p.add_argument("--alpha", type=float)
        p.add_argument("--format", choices=["csv", "json"])
        p.add_argument("--out", help="output path (default stdout)")
        p.add_argument("--timings", action="store_true", default=None)
        p.add_argument("--server", help="service URL; default runs in-process")
        p.add_argument("--config", help="JSON config file; flags override its keys")

    p = sub.add_parser("simulate", help="one attack/defense scenario with its cascade")
    add_common(p)
    p.add_argument("--attack", help="comma-separated node ids")
    p.add_argument("--defend", help="comma-separated node ids")

    p = sub.add_parser("loads", help="per-node and per-edge load report")
    add_common(p)

    p = sub.add_parser("respond", help="best response to an opponent mix")
    add_common(p)
    p.add_argument("--side", choices=["attacker", "defender"], required=True)
    p.add_argument("--ka", type=int)
    p.add_argument("--kd", type=int)
    p.add_argument("--oracle", choices=["exact", "greedy"])
    p.add_argument("--opponent", help="comma-separated node ids (pure strategy)")
    p.add_argument("--opponent-mix", help="JSON file with [{nodes, probability}]")

    p = sub.add_parser("solve", help="double-oracle minimax solve")
    add_common(p)
    p.add_argument("--ka", type=int)
    p.add_argument("--kd", type=int)
    p.add_argument("--oracle", choices=["exact", "greedy"])
    p.add_argument("--max-iters", type=int, dest="max_iters")

    p = sub.add_parser("sweep", help="metric sweep over alpha/budget lists")
    add_common(p)
    p.add_argument("--alphas", help="comma-separated alpha list")
    p.add_argument("--ka-list", dest="ka_list", help="comma-separated ka list")
    p.add_argument("--kd-list", dest="kd_list", help="comma-separated kd list")
    p.add_argument("--ka", type=int)
    p.add_argument("--kd", type=int)
    p.add_argument("--oracle", choices=["exact", "greedy"])
    p.add_argument("--max-iters", type=int, dest="max_iters")

    p = sub.add_parser("gen", help="generate a synthetic grid file")
    add_common(p, grid=False)
    p.add_argument("--synthetic", required=True, help="N,M,SRC_FRAC,LD_FRAC")

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)

    return parser


def _merge_config(args: argparse.Namespace) -> dict:
    """Defaults, then config-file keys, then explicit flags."""
    merged = dict(DEFAULTS)
    config_path = getattr(args, "config", None)
    if config_path:
        merged.update(json.loads(Path(config_path).read_text()))
    for key, value in vars(args).items():
        if key != "config" and value is not None:
            merged[key] = value
    return merged


def _grid_source(cfg: dict) -> tuple[GridSource, str]:
    """Resolve the grid plus the label echoed in every output row."""
    grid_path, synthetic = cfg.get("grid"), cfg.get("synthetic")
    if (grid_path is None) == (synthetic is None):
        raise ValueError("provide exactly one of --grid or --synthetic")
    if grid_path is not None:
        return GridSource(text=Path(grid_path).read_text()), str(grid_path)
    spec = _synthetic_spec(synthetic, int(cfg["seed"]))
    return GridSource(synthetic=spec), f"synthetic:{synthetic}"


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    return str(value)


def render_rows(header: list[str], rows: list[dict], fmt: str) -> str:
    if fmt == "json":
        return "\n".join(
            json.dumps({k: row.get(k) for k in header}) for row in rows
        ) + ("\n" if rows else "")
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_cell(row.get(k)) for k in header])
    return buf.getvalue()


def _edge_text(edges) -> str:
    return ";".join(f"{u}-{v}" for u, v in edges)


def _node_text(nodes) -> str:
    return ";".join(str(i) for i in nodes)


def _with_timings(header: list[str], cfg: dict) -> list[str]:
    return header + ["wall_seconds"] if cfg["timings"] else header


def _cmd_simulate(cfg: dict) -> str:
    grid, label = _grid_source(cfg)
    req = SimulateRequest(
        grid=grid, alpha=cfg["alpha"],
        attack=_int_list(cfg.get("attack") or ""),
        defend=_int_list(cfg.get("defend") or ""),
        timings=cfg["timings"],
    )
    resp = run_request(req, cfg["server"])
    base = {
        "command": "simulate", "grid": label, "seed": cfg["seed"],
        "alpha": cfg["alpha"], "attack": _node_text(req.attack),
        "defend": _node_text(req.defend),
    }
    rows = [
        {**base, "kind": "result", "payoff": resp.payoff,
         "num_rounds": resp.num_rounds, "wall_seconds": resp.wall_seconds}
    ]
    for rnd in resp.rounds:
        rows.append(
            {**base, "kind": "round", "round": rnd.round,
             "removed_edges": _edge_text(rnd.removed_edges)}
        )
    header = _with_timings(
        ["command", "grid", "seed", "alpha", "attack", "defend", "kind",
         "round", "removed_edges", "payoff", "num_rounds"], cfg,
    )
    return render_rows(header, rows, cfg["format"])


def _cmd_loads(cfg: dict) -> str:
    grid, label = _grid_source(cfg)
    resp = run_request(
        LoadsRequest(grid=grid, alpha=cfg["alpha"], timings=cfg["timings"]),
        cfg["server"],
    )
    base = {"command": "loads", "grid": label, "seed": cfg["seed"],
            "alpha": cfg["alpha"]}
    rows = []
    for n in resp.nodes:
        rows.append(
            {**base, "kind": "node", "node": n.node, "nodal_load": n.nodal_load,
             "single_attack_payoff": n.single_attack_payoff,
             "wall_seconds": resp.wall_seconds}
        )
    for e in resp.edges:
        rows.append(
            {**base, "kind": "edge", "edge": f"{e.u}-{e.v}", "edge_load": e.load,
             "wall_seconds": resp.wall_seconds}
        )
    header = _with_timings(
        ["command", "grid", "seed", "alpha", "kind", "node", "edge",
         "nodal_load", "edge_load", "single_attack_payoff"], cfg,
    )
    return render_rows(header, rows, cfg["format"])


def _opponent_entries(cfg: dict) -> list[MixEntry]:
    opponent, mix_path = cfg.get("opponent"), cfg.get("opponent_mix")
    if opponent is not None and mix_path is not None:
        raise ValueError("use --opponent or --opponent-mix, not both")
    if mix_path is not None:
        entries = json.loads(Path(mix_path).read_text())
        return [MixEntry(**e) for e in entries]
    return [MixEntry(nodes=_int_list(opponent or ""), probability=1.0)]


def _cmd_respond(cfg: dict) -> str:
    grid, label = _grid_source(cfg)
    budget = int(cfg["ka"] if cfg["side"] == "attacker" else cfg["kd"])
    resp = run_request(
        RespondRequest(
            grid=grid, alpha=cfg["alpha"], side=cfg["side"], budget=budget,
            oracle=cfg["oracle"], opponent=_opponent_entries(cfg),
            timings=cfg["timings"],
        ),
        cfg["server"],
    )
    rows = [{
        "command": "respond", "grid": label, "seed": cfg["seed"],
        "alpha": cfg["alpha"], "side": resp.side, "budget": budget,
        "oracle": cfg["oracle"], "strategy": _node_text(resp.nodes),
        "value": resp.value, "wall_seconds": resp.wall_seconds,
    }]
    header = _with_timings(
        ["command", "grid", "seed", "alpha", "side", "budget", "oracle",
         "strategy", "value"], cfg,
    )
    return render_rows(header, rows, cfg["format"])


def _cmd_solve(cfg: dict) -> str:
    grid, label = _grid_source(cfg)
    resp = run_request(
        SolveRequest(
            grid=grid, alpha=cfg["alpha"], ka=int(cfg["ka"]), kd=int(cfg["kd"]),
            oracle=cfg["oracle"], max_iters=int(cfg["max_iters"]),
            timings=cfg["timings"],
        ),
        cfg["server"],
    )
    base = {
        "command": "solve", "grid": label, "seed": cfg["seed"],
        "alpha": cfg["alpha"], "ka": cfg["ka"], "kd": cfg["kd"],
        "oracle": cfg["oracle"], "max_iters": cfg["max_iters"],
    }
    rows = [
        {**base, "kind": "solution", "value": resp.value,
         "converged": resp.converged, "iterations": resp.iterations,
         "wall_seconds": resp.wall_seconds}
    ]
    for kind, mix in (("attack_mix", resp.attacker_mix),
                      ("defense_mix", resp.defender_mix)):
        for entry in mix:
            rows.append(
                {**base, "kind": kind, "strategy": _node_text(entry.nodes),
                 "probability": entry.probability}
            )
    for st in resp.iteration_stats:
        rows.append(
            {**base, "kind": "iteration", "iteration": st.iteration,
             "restricted_value": st.restricted_value,
             "attacker_response_value": st.attacker_response_value,
             "defender_response_value": st.defender_response_value,
             "wall_seconds": st.wall_seconds}
        )
    header = _with_timings(
        ["command", "grid", "seed", "alpha", "ka", "kd", "oracle", "max_iters",
         "kind", "value", "converged", "iterations", "strategy", "probability",
         "iteration", "restricted_value", "attacker_response_value",
         "defender_response_value"], cfg,
    )
    return render_rows(header, rows, cfg["format"])


def _cmd_sweep(cfg: dict) -> str:
    grid, label = _grid_source(cfg)
    alphas = cfg.get("alphas")
    alphas = _float_list(alphas) if isinstance(alphas, str) else alphas
    ka_list = cfg.get("ka_list")
    ka_list = _int_list(ka_list) if isinstance(ka_list, str) else ka_list
    kd_list = cfg.get("kd_list")
    kd_list = _int_list(kd_list) if isinstance(kd_list, str) else kd_list
    resp = run_request(
        SweepRequest(
            grid=grid,
            alphas=alphas or [cfg["alpha"]],
            ka_list=ka_list or [int(cfg["ka"])],
            kd_list=kd_list or [int(cfg["kd"])],
            oracle=cfg["oracle"], max_iters=int(cfg["max_iters"]),
            seed=int(cfg["seed"]), timings=cfg["timings"],
        ),
        cfg["server"],
    )
    rows = [
        {"command": "sweep", "grid": label, "seed": cfg["seed"],
         "alpha": r.alpha, "ka": r.ka, "kd": r.kd, "oracle": cfg["oracle"],
         "max_iters": cfg["max_iters"], "metric": r.metric, "value": r.value,
         "iterations": r.iterations, "converged": r.converged,
         "wall_seconds": resp.wall_seconds}
        for r in resp.rows
    ]
    header = _with_timings(
        ["command", "grid", "seed", "alpha", "ka", "kd", "oracle", "max_iters",
         "metric", "value", "iterations", "converged"], cfg,
    )
    return render_rows(header, rows, cfg["format"])


def _cmd_gen(cfg: dict) -> str:
    spec = _synthetic_spec(cfg["synthetic"], int(cfg["seed"]))
    resp = run_request(
        GenerateRequest(
            n=spec.n, m=spec.m, src_frac=spec.src_frac, ld_frac=spec.ld_frac,
            seed=spec.seed,
        ),
        cfg["server"],
    )
    return resp.grid_text


_COMMANDS = {
    "simulate": _cmd_simulate,
    "loads": _cmd_loads,
    "respond": _cmd_respond,
    "solve": _cmd_solve,
    "sweep": _cmd_sweep,
    "gen": _cmd_gen,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "serve":
        import uvicorn

        uvicorn.run("gridgame.service.app:app", host=args.host, port=args.port)
        return 0
    try:
        cfg = _merge_config(args)
        output = _COMMANDS[args.command](cfg)
    except CapacityLimitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    out_path = cfg.get("out")
    if out_path:
        Path(out_path).write_text(output)
    else:
        sys.stdout.write(output)
    return 0


if __name__ == "__main__":
    sys.exit(main())
