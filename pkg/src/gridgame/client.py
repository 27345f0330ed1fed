"""Thin client for the grid-game service.

Dispatches a request model either to the in-process handlers (default) or to
a running service over HTTP when a server URL is given. Both paths return the
same response models, so callers never care which transport ran.
"""

from __future__ import annotations

import httpx
from pydantic import BaseModel

from .errors import CapacityLimitError
from .service import handlers
from .service.schemas import (
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

_ROUTES = {
    SimulateRequest: ("/simulate", handlers.handle_simulate, SimulateResponse),
    LoadsRequest: ("/loads", handlers.handle_loads, LoadsResponse),
    RespondRequest: ("/respond", handlers.handle_respond, RespondResponse),
    SolveRequest: ("/solve", handlers.handle_solve, SolveResponse),
    SweepRequest: ("/sweep", handlers.handle_sweep, SweepResponse),
    GenerateRequest: ("/generate", handlers.handle_generate, GenerateResponse),
}


def run_request(request: BaseModel, server: str | None = None) -> BaseModel:
    """Execute a request locally or against a remote service."""
    path, handler, response_model = _ROUTES[type(request)]
    if server is None:
        return handler(request)
    resp = httpx.post(
        server.rstrip("/") + path, json=request.model_dump(), timeout=None
    )
    if resp.status_code == 409:
        raise CapacityLimitError(resp.json().get("error", "capacity limit exceeded"))
    if resp.status_code >= 400:
        try:
            detail = resp.json().get("error") or resp.json().get("detail")
        except ValueError:
            detail = resp.text
        raise ValueError(f"server rejected request: {detail}")
    return response_model.model_validate(resp.json())
