"""Stateless HTTP/JSON facade over the drawing library.

Every request ships the full context (and layout where relevant), so the
service holds no session state and identical requests yield identical
responses.  The endpoints are the contract of the interactive editor:

* ``POST /lattice``  context -> concepts and covers
* ``POST /draw``     context + algorithm -> staged layouts and metrics
* ``POST /drag``     context + layout + node + target -> re-projected layout
* ``POST /snap``     context + layout + grid step -> snapped layout
"""

from __future__ import annotations

import json

import numpy as np
from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import StreamingResponse
from pydantic import BaseModel, Field

from .additive import (
    RepresentationKind,
    build_srm,
    is_additive,
    project_additive,
    snap_to_grid,
)
from .formats import (
    config_from_mapping,
    context_from_json,
    layout_from_json,
    layout_to_json,
    lattice_to_json,
)
from .lattice import compute_lattice, validate_line_diagram
from .pipeline import ALGORITHMS

__all__ = ["create_app"]

ADDITIVE_TOL = 1e-6


class ContextPayload(BaseModel):
    objects: list[str]
    attributes: list[str]
    incidence: list[list[bool]]


class DrawRequest(BaseModel):
    context: ContextPayload
    algo: str = "dimflux"
    config: dict = Field(default_factory=dict)
    stream: bool = False


class DragRequest(BaseModel):
    context: ContextPayload
    layout: dict
    concept: int
    newPosition: list[float]


class SnapRequest(BaseModel):
    context: ContextPayload
    layout: dict
    gridStep: float


def _lattice_of(payload: ContextPayload):
    try:
        ctx = context_from_json(payload.model_dump())
    except ValueError as exc:
        raise HTTPException(status_code=400, detail=str(exc)) from exc
    return compute_lattice(ctx)


def _layout_of(lat, payload: dict) -> np.ndarray:
    try:
        return layout_from_json(payload, lat)
    except (ValueError, KeyError, TypeError) as exc:
        raise HTTPException(status_code=400, detail=f"invalid layout: {exc}") from exc


def create_app() -> FastAPI:
    app = FastAPI(title="latflux layout service", version="0.1.0")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.post("/lattice")
    def lattice_endpoint(payload: ContextPayload):
        lat = _lattice_of(payload)
        return lattice_to_json(lat)

    @app.post("/draw")
    def draw_endpoint(request: DrawRequest):
        if request.algo not in ALGORITHMS:
            raise HTTPException(status_code=400, detail=f"unknown algo {request.algo!r}")
        lat = _lattice_of(request.context)
        try:
            cfg = config_from_mapping(request.config)
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc

        def run():
            result = ALGORITHMS[request.algo](lat, cfg)
            return {
                "algo": request.algo,
                "stages": {
                    name: layout_to_json(lat, layout)
                    for name, layout in result.stages.items()
                },
                "metrics": {
                    name: metrics.as_dict()
                    for name, metrics in result.metrics.items()
                },
                "converged": result.converged,
                "flags": list(result.flags),
                "lattice": lattice_to_json(lat),
            }

        if not request.stream:
            return run()

        def streamer():
            # chunked status lines (iteration, energy), then the result body
            from .forces import ForceMode, initialize_vectors, optimize, planarity_enhancer

            if request.algo in ("attr-fdp", "doubly-fdp"):
                mode = (
                    ForceMode.ATTRIBUTE_ADDITIVE
                    if request.algo == "attr-fdp"
                    else ForceMode.DOUBLY_ADDITIVE
                )
                order = planarity_enhancer(lat, mode, cfg)
                vec0 = initialize_vectors(lat, order, mode, cfg)
                opt = optimize(lat, vec0, mode, cfg)
                for it, e_rep, e_att, e_grav, f_inf in opt.trace[:: max(1, len(opt.trace) // 50)]:
                    yield f"progress iteration={it} energy={e_rep + e_att + e_grav:.6g}\n"
            yield json.dumps(run()) + "\n"

        return StreamingResponse(streamer(), media_type="text/plain")

    @app.post("/drag")
    def drag_endpoint(request: DragRequest):
        lat = _lattice_of(request.context)
        layout = _layout_of(lat, request.layout)
        if not (0 <= request.concept < len(lat)):
            raise HTTPException(status_code=400, detail="concept index out of range")
        if len(request.newPosition) != 2:
            raise HTTPException(status_code=400, detail="newPosition must be [x, y]")
        basis = build_srm(lat, RepresentationKind.DOUBLY_ADDITIVE)
        additive, residual = is_additive(basis, layout, ADDITIVE_TOL)
        if not additive:
            raise HTTPException(
                status_code=400,
                detail=f"layout is not additive (residual {residual:.3e})",
            )
        moved = layout.copy()
        moved[request.concept] = request.newPosition
        # a displacement that already leaves the cone of upward diagrams is
        # not executed; otherwise project and re-check the result
        moved_report = validate_line_diagram(lat, moved, min_gap=0.0)
        projected = project_additive(basis, moved)
        report = validate_line_diagram(lat, projected, min_gap=0.0)
        if moved_report.order_valid and report.order_valid:
            return {"layout": layout_to_json(lat, projected), "accepted": True}
        return {"layout": layout_to_json(lat, layout), "accepted": False}

    @app.post("/snap")
    def snap_endpoint(request: SnapRequest):
        if request.gridStep <= 0:
            raise HTTPException(status_code=400, detail="gridStep must be positive")
        lat = _lattice_of(request.context)
        layout = _layout_of(lat, request.layout)
        basis = build_srm(lat, RepresentationKind.DOUBLY_ADDITIVE)
        additive, _ = is_additive(basis, layout, ADDITIVE_TOL)
        if not additive:
            layout = project_additive(basis, layout)
        snapped = snap_to_grid(basis, layout, request.gridStep)
        report = validate_line_diagram(lat, snapped)
        return {"layout": layout_to_json(lat, snapped), "valid": report.valid}

    return app
