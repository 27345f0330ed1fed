"""Pydantic request/response models for the grid-game service.

Every operation the service (and the CLI, which is a thin client of the same
handlers) exposes is described here. Grids travel inline: either as grid-file
text or as synthetic-generator parameters, so requests are self-contained and
reproducible.
"""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, Field, model_validator


class SyntheticSpec(BaseModel):
    n: int
    m: int
    src_frac: float
    ld_frac: float
    seed: int = 0


class GridSource(BaseModel):
    """Exactly one of: inline grid-file text, or synthetic parameters."""

    text: Optional[str] = None
    synthetic: Optional[SyntheticSpec] = None

    @model_validator(mode="after")
    def _exactly_one(self):
        if (self.text is None) == (self.synthetic is None):
            raise ValueError("provide exactly one of 'text' or 'synthetic'")
        return self


class MixEntry(BaseModel):
    nodes: list[int]
    probability: float


class SimulateRequest(BaseModel):
    grid: GridSource
    alpha: float = 0.5
    attack: list[int] = Field(default_factory=list)
    defend: list[int] = Field(default_factory=list)
    timings: bool = False


class CascadeRound(BaseModel):
    round: int
    removed_edges: list[tuple[int, int]]


class SimulateResponse(BaseModel):
    payoff: int
    num_rounds: int
    rounds: list[CascadeRound]
    wall_seconds: Optional[float] = None


class LoadsRequest(BaseModel):
    grid: GridSource
    alpha: float = 0.5
    timings: bool = False


class NodeLoadRow(BaseModel):
    node: int
    nodal_load: float
    single_attack_payoff: int


class EdgeLoadRow(BaseModel):
    u: int
    v: int
    load: float


class LoadsResponse(BaseModel):
    nodes: list[NodeLoadRow]
    edges: list[EdgeLoadRow]
    wall_seconds: Optional[float] = None


class RespondRequest(BaseModel):
    grid: GridSource
    alpha: float = 0.5
    side: Literal["attacker", "defender"]
    budget: int
    oracle: Literal["exact", "greedy"] = "exact"
    opponent: list[MixEntry] = Field(
        default_factory=lambda: [MixEntry(nodes=[], probability=1.0)]
    )
    timings: bool = False


class RespondResponse(BaseModel):
    side: str
    nodes: list[int]
    value: float
    wall_seconds: Optional[float] = None


class SolveRequest(BaseModel):
    grid: GridSource
    alpha: float = 0.5
    ka: int = 1
    kd: int = 1
    oracle: Literal["exact", "greedy"] = "exact"
    max_iters: int = 200
    timings: bool = False


class IterationRow(BaseModel):
    iteration: int
    restricted_value: float
    attacker_response_value: float
    defender_response_value: float
    wall_seconds: Optional[float] = None


class SolveResponse(BaseModel):
    value: float
    converged: bool
    iterations: int
    attacker_mix: list[MixEntry]
    defender_mix: list[MixEntry]
    iteration_stats: list[IterationRow]
    wall_seconds: Optional[float] = None


class SweepRequest(BaseModel):
    grid: GridSource
    alphas: list[float]
    ka_list: list[int]
    kd_list: list[int]
    oracle: Literal["exact", "greedy"] = "exact"
    max_iters: int = 200
    seed: int = 0
    timings: bool = False

    @model_validator(mode="after")
    def _non_empty(self):
        if not self.alphas or not self.ka_list or not self.kd_list:
            raise ValueError("sweep lists must be non-empty")
        if any(a < 0 for a in self.alphas):
            raise ValueError("alpha values must be non-negative")
        return self


class SweepRow(BaseModel):
    alpha: float
    ka: int
    kd: int
    metric: Literal[
        "game_value", "dlb_vs_minimax", "dlb_vs_best_response", "uniform_baseline"
    ]
    value: float
    iterations: Optional[int] = None
    converged: Optional[bool] = None


class SweepResponse(BaseModel):
    rows: list[SweepRow]
    wall_seconds: Optional[float] = None


class GenerateRequest(BaseModel):
    n: int
    m: int
    src_frac: float
    ld_frac: float
    seed: int = 0


class GenerateResponse(BaseModel):
    grid_text: str


class ErrorBody(BaseModel):
    error: str
    kind: Literal["input", "capacity"]
