"""FastAPI app exposing the grid-game operations over HTTP.

Input errors map to 400, enumeration-limit errors to 409; bodies follow
ErrorBody so clients can tell them apart without parsing messages.
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from ..errors import CapacityLimitError
from . import handlers
from .schemas import (
    GenerateRequest,
    GenerateResponse,
    LoadsRequest,
    LoadsResponse,
    RespondRequest,
    RespondResponse,
    SimulateRequest,
    SimulateResponse,
    SolveRequest,
    SolveResponse,
    SweepRequest,
    SweepResponse,
)

app = FastAPI(
    title="gridgame",
    description="Cascading-failure grid game: simulation, best responses, "
    "and minimax solving",
)


@app.exception_handler(ValueError)
async def _value_error(_: Request, exc: ValueError) -> JSONResponse:
    return JSONResponse(status_code=400, content={"error": str(exc), "kind": "input"})


@app.exception_handler(CapacityLimitError)
async def _capacity_error(_: Request, exc: CapacityLimitError) -> JSONResponse:
    return JSONResponse(
        status_code=409, content={"error": str(exc), "kind": "capacity"}
    )


@app.get("/health")
def health() -> dict:
    return {"status": "ok"}


@app.post("/simulate", response_model=SimulateResponse)
def simulate(req: SimulateRequest) -> SimulateResponse:
    return handlers.handle_simulate(req)


@app.post("/loads", response_model=LoadsResponse)
def loads(req: LoadsRequest) -> LoadsResponse:
    return handlers.handle_loads(req)


@app.post("/respond", response_model=RespondResponse)
def respond(req: RespondRequest) -> RespondResponse:
    return handlers.handle_respond(req)


@app.post("/solve", response_model=SolveResponse)
def solve(req: SolveRequest) -> SolveResponse:
    return handlers.handle_solve(req)


@app.post("/sweep", response_model=SweepResponse)
def sweep(req: SweepRequest) -> SweepResponse:
    return handlers.handle_sweep(req)


@app.post("/generate", response_model=GenerateResponse)
def generate(req: GenerateRequest) -> GenerateResponse:
    return handlers.handle_generate(req)
