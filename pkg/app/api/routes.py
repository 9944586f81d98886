"""
FastAPI API routes for the Track-Layout engine.
Thin adapters over app.core.pipeline; every artifact is verified before it is returned.
"""

import logging
from contextlib import contextmanager
from typing import Any, Optional, Union

from fastapi import APIRouter, Depends, Header, HTTPException, Query
from pydantic import BaseModel, Field

from app.config import API_KEY
from app.core import pipeline
from app.core.database import delete_run, get_run, insert_run, query_runs
from app.core.errors import EXIT_RESOURCE, EXIT_VERIFY, LayoutError
from app.core.schemas import Envelope

log = logging.getLogger("layout.api")

router = APIRouter(prefix="/api")


# --- Auth ---

def verify_api_key(x_api_key: str = Header(default="")):
    if API_KEY and x_api_key != API_KEY:
        raise HTTPException(status_code=401, detail="Invalid API key")


# --- Errors ---

@contextmanager
def layout_errors():
    """LayoutError -> 400 input, 413 resource limit, 422 failed self-check."""
    try:
        yield
    except LayoutError as exc:
        status = {EXIT_RESOURCE: 413, EXIT_VERIFY: 422}.get(exc.code, 400)
        log.warning("%s -> %d: %s", type(exc).__name__, status, exc)
        raise HTTPException(status_code=status, detail=exc.to_dict()) from exc


# --- Models ---

class GenerateRequest(BaseModel):
    family: str
    params: dict[str, Any] = {}
    seed: Optional[int] = None


class LayoutRequest(BaseModel):
    envelope: Envelope
    method: str = "auto"
    k: Optional[int] = Field(None, ge=0)
    balance: Optional[str] = None
    wrap: bool = False
    proper: bool = False


class DrawRequest(BaseModel):
    envelope: Envelope
    r: Optional[Union[int, str]] = None


class EnvelopeRequest(BaseModel):
    envelope: Envelope
    k: Optional[int] = Field(None, ge=0)
    limit: Optional[int] = Field(None, ge=0)


class StatsRequest(BaseModel):
    envelope: Envelope
    label: str = ""


# --- Pipeline ---

@router.post("/generate", dependencies=[Depends(verify_api_key)])
def generate_route(req: GenerateRequest):
    """Generate a graph envelope."""
    with layout_errors():
        return pipeline.generate_envelope(req.family, req.params, req.seed).model_dump(mode="json", exclude_none=True)


@router.post("/layout/{kind}", dependencies=[Depends(verify_api_key)])
def layout_route(kind: str, req: LayoutRequest):
    """Build and verify a track, queue or stack layout."""
    with layout_errors():
        if kind == "track":
            env = pipeline.layout_track(req.envelope, req.method, req.k, req.balance, req.wrap, req.proper)
        elif kind == "queue":
            env = pipeline.layout_queue(req.envelope, req.method)
        elif kind == "stack":
            env = pipeline.layout_stack(req.envelope)
        else:
            raise HTTPException(status_code=404, detail=f"Unknown layout kind '{kind}'")
        return env.model_dump(mode="json", exclude_none=True)


@router.post("/draw/{method}", dependencies=[Depends(verify_api_key)])
def draw_route(method: str, req: DrawRequest):
    """Three-dimensional drawing; returns the envelope with the drawing translated to the origin."""
    if method not in pipeline.DRAW_METHODS:
        raise HTTPException(status_code=404, detail=f"Unknown drawing method '{method}'")
    with layout_errors():
        return pipeline.draw(req.envelope, method, req.r).model_dump(mode="json", exclude_none=True)


@router.post("/verify/{kind}", dependencies=[Depends(verify_api_key)])
def verify_route(kind: str, req: EnvelopeRequest):
    if kind not in pipeline.VERIFY_KINDS:
        raise HTTPException(status_code=404, detail=f"Unknown artifact kind '{kind}'")
    with layout_errors():
        return pipeline.verify(req.envelope, kind, req.k).to_dict()


@router.post("/oracle/{kind}", dependencies=[Depends(verify_api_key)])
def oracle_route(kind: str, req: EnvelopeRequest):
    """Exact parameter of a small graph (size-gated)."""
    with layout_errors():
        return pipeline.oracle(req.envelope, kind, req.limit).to_dict()


@router.post("/stats", dependencies=[Depends(verify_api_key)])
def stats_route(req: StatsRequest):
    """Compute the stats row and store it as a run."""
    with layout_errors():
        row = pipeline.stats_row(req.envelope)
    run_id = insert_run(row, label=req.label)
    return {"id": run_id, **row}


# --- Runs ---

@router.get("/runs", dependencies=[Depends(verify_api_key)])
def list_runs(family: Optional[str] = None, limit: int = Query(default=100, ge=1, le=1000)):
    return query_runs(family, limit)


@router.get("/runs/{run_id}", dependencies=[Depends(verify_api_key)])
def get_run_route(run_id: int):
    result = get_run(run_id)
    if not result:
        raise HTTPException(status_code=404, detail="Run not found")
    return result


@router.delete("/runs/{run_id}", dependencies=[Depends(verify_api_key)])
def delete_run_route(run_id: int):
    if not delete_run(run_id):
        raise HTTPException(status_code=404, detail="Run not found")
    return {"deleted": run_id}
