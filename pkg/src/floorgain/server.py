"""HTTP evaluation service consumed by the browser editor.

Stateless between requests. Error mapping: malformed or schema-violating
requests return 400 with field diagnostics; geometrically impossible
evaluations (probe too close, not enclosed) return 422 with actionable
diagnostics such as uncovered azimuth intervals.
"""

from __future__ import annotations

from typing import Any

from fastapi import FastAPI, Request, Response
from fastapi.exceptions import RequestValidationError
from pydantic import BaseModel, Field

from .errors import FloorgainError, LayoutError, NotEnclosed, ProbeTooClose
from .jobs import (
    build_heatmap_response,
    build_point_response,
    build_presets_response,
    build_sweep_response,
    resolve_layout,
    resolve_params,
)
from .layoutio import canonical_json


class ParamsSpec(BaseModel):
    preset: str | None = None
    f_c_hz: float | None = None
    p_t_dbw_m2: float | None = None
    p_th_dbw_m2: float | None = None
    sigma2_dbw: float | None = None
    h_t_m: float | None = None
    h_r_m: float | None = None
    n_l: float | None = None
    n_n: float | None = None

    def resolve(self):
        overrides = {
            k: v
            for k, v in self.model_dump().items()
            if k != "preset" and v is not None
        }
        return resolve_params(self.preset, overrides)


class EvaluateRequest(BaseModel):
    layout: dict[str, Any] | None = None
    layout_ref: str | None = None
    params: ParamsSpec = Field(default_factory=ParamsSpec)
    x: float
    y: float
    margin: float = 0.05


class HeatmapRequest(BaseModel):
    layout: dict[str, Any] | None = None
    layout_ref: str | None = None
    params: ParamsSpec = Field(default_factory=ParamsSpec)
    resolution: float = 0.25
    margin: float = 0.05


class SweepRequest(BaseModel):
    params: ParamsSpec = Field(default_factory=ParamsSpec)
    areas: list[float]
    aspect_ratios: list[float]
    resolution: float = 0.5


def _json_response(payload: dict, status_code: int = 200) -> Response:
    return Response(
        content=canonical_json(payload), media_type="application/json", status_code=status_code
    )


def create_app(grid_workers: int = 1) -> FastAPI:
    app = FastAPI(title="floorgain", docs_url=None, redoc_url=None)

    @app.exception_handler(RequestValidationError)
    async def schema_error(_req: Request, exc: RequestValidationError) -> Response:
        return _json_response(
            {"error": "SchemaViolation", "detail": [
                {"loc": [str(x) for x in e["loc"]], "msg": e["msg"]} for e in exc.errors()
            ]},
            status_code=400,
        )

    @app.exception_handler(LayoutError)
    async def layout_error(_req: Request, exc: LayoutError) -> Response:
        return _json_response(
            {"error": "LayoutError", "message": str(exc), "context": exc.context},
            status_code=400,
        )

    @app.exception_handler(NotEnclosed)
    async def not_enclosed(_req: Request, exc: NotEnclosed) -> Response:
        return _json_response(
            {
                "error": "NotEnclosed",
                "message": str(exc),
                "gaps_rad": [[a, b] for a, b in exc.gaps],
            },
            status_code=422,
        )

    @app.exception_handler(ProbeTooClose)
    async def probe_too_close(_req: Request, exc: ProbeTooClose) -> Response:
        return _json_response(
            {
                "error": "ProbeTooClose",
                "message": str(exc),
                "wall_id": exc.wall_id,
                "distance_m": exc.distance,
            },
            status_code=422,
        )

    @app.exception_handler(FloorgainError)
    async def domain_error(_req: Request, exc: FloorgainError) -> Response:
        return _json_response({"error": type(exc).__name__, "message": str(exc)}, status_code=422)

    @app.exception_handler(ValueError)
    async def value_error(_req: Request, exc: ValueError) -> Response:
        return _json_response({"error": "ValueError", "message": str(exc)}, status_code=400)

    @app.get("/healthz")
    def healthz() -> Response:
        return Response(content="ok", media_type="text/plain")

    @app.get("/api/presets")
    def presets() -> Response:
        return _json_response(build_presets_response())

    @app.post("/api/evaluate")
    def evaluate(req: EvaluateRequest) -> Response:
        layout = resolve_layout(req.layout, req.layout_ref)
        p = req.params.resolve()
        return _json_response(build_point_response(layout, req.x, req.y, p, margin=req.margin))

    @app.post("/api/heatmap")
    def heatmap(req: HeatmapRequest) -> Response:
        layout = resolve_layout(req.layout, req.layout_ref)
        p = req.params.resolve()
        return _json_response(
            build_heatmap_response(
                layout, p, resolution=req.resolution, margin=req.margin, workers=grid_workers
            )
        )

    @app.post("/api/sweep")
    def sweep(req: SweepRequest) -> Response:
        p = req.params.resolve()
        return _json_response(
            build_sweep_response(p, req.areas, req.aspect_ratios, resolution=req.resolution)
        )

    return app


def serve(host: str = "127.0.0.1", port: int = 8000, workers: int = 1) -> None:
    """Run the service until interrupted."""
    import uvicorn

    uvicorn.run(create_app(grid_workers=workers), host=host, port=port, log_level="warning")
