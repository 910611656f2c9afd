"""HTTP service exposing the drill engine to scripts and the drill-console UI.

One immutable bundle per process; every endpoint is a pure read so requests
can be handled concurrently and responses are fully cacheable by (query)
key. Seeds are always client-supplied: the server holds no randomness.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, Response

from .early_warning import arrival_times, countdown_track
from .gm_field import OutOfBoundsError, SitePoint
from .scenario import (
    MissingEDPError,
    ScenarioBundle,
    UnknownRoomError,
    load_bundle,
    report_to_text,
    run_drill,
    site_envelope,
)

MAX_FIELD_POINTS = 10_000


@dataclass(frozen=True)
class ServiceConfig:
    port: int
    bundle_path: str
    cors_allowed: bool = False
    host: str = "127.0.0.1"

    def __post_init__(self) -> None:
        if not 1 <= self.port <= 65535:
            raise ValueError(f"port must be in 1..65535, got {self.port}")


def _field_stride(ncols: int, nrows: int, max_points: int = MAX_FIELD_POINTS) -> int:
    """Smallest stride whose decimated lattice fits the point budget."""
    stride = 1
    while math.ceil(ncols / stride) * math.ceil(nrows / stride) > max_points:
        stride += 1
    return stride


def _site_or_none(lon: float, lat: float) -> SitePoint | None:
    try:
        return SitePoint(lon, lat)
    except ValueError:
        return None


def build_app(bundle: ScenarioBundle, cors_allowed: bool = False) -> FastAPI:
    app = FastAPI(title="shakedrill", docs_url=None, redoc_url=None)
    if cors_allowed:
        app.add_middleware(
            CORSMiddleware,
            allow_origins=["*"],
            allow_methods=["GET"],
            allow_headers=["*"],
        )

    @app.exception_handler(RequestValidationError)
    async def malformed_query(request: Request, exc: RequestValidationError) -> JSONResponse:
        return JSONResponse(status_code=400, content={"error": str(exc.errors())})

    def unprocessable(message: str) -> JSONResponse:
        return JSONResponse(status_code=422, content={"error": message})

    @app.get("/api/health")
    def health() -> dict:
        return {"status": "ok", "scenario": bundle.field.scenario_name}

    @app.get("/api/field")
    def field(full: bool = False) -> dict:
        gm = bundle.field
        stride = 1 if full else _field_stride(gm.ncols, gm.nrows)
        rows = list(range(0, gm.nrows, stride))
        cols = list(range(0, gm.ncols, stride))
        points = []
        for row in rows:
            for col in cols:
                site = gm.node_site(row, col)
                cell = gm.node(row, col)
                points.append(
                    {"lon": site.lon, "lat": site.lat, "pga_g": cell.pga, "pgv_cms": cell.pgv}
                )
        lon_min, lon_max, lat_min, lat_max = gm.bounds()
        return {
            "scenario": gm.scenario_name,
            "bounds": {
                "lon_min": lon_min,
                "lon_max": lon_max,
                "lat_min": lat_min,
                "lat_max": lat_max,
            },
            "dlon": gm.dlon,
            "dlat": gm.dlat,
            "ncols": gm.ncols,
            "nrows": gm.nrows,
            "periods": list(gm.periods),
            "stride": stride,
            "points": points,
            "epicenter": {
                "lon": bundle.rupture.epicenter.lon,
                "lat": bundle.rupture.epicenter.lat,
            },
        }

    @app.get("/api/report")
    def report(lat: float, lon: float, room: str, seed: int) -> Response:
        site = _site_or_none(lon, lat)
        if site is None:
            return unprocessable(f"site ({lon}, {lat}) is not a valid coordinate")
        try:
            result = run_drill(bundle, site, room, seed)
        except (OutOfBoundsError, UnknownRoomError, MissingEDPError) as exc:
            return unprocessable(str(exc))
        return Response(content=report_to_text(result), media_type="application/json")

    @app.get("/api/warning")
    def warning(lat: float, lon: float, tick: float = 1.0):
        site = _site_or_none(lon, lat)
        if site is None:
            return unprocessable(f"site ({lon}, {lat}) is not a valid coordinate")
        if not bundle.field.contains(site):
            return unprocessable(f"site ({lon}, {lat}) out of bounds")
        if not tick > 0.0:
            return unprocessable(f"tick must be positive, got {tick}")
        est = arrival_times(bundle.rupture, site)
        return {
            "distance_km": est.distance_km,
            "p_arrival_s": est.p_arrival,
            "s_arrival_s": est.s_arrival,
            "warning_time_s": est.warning_time,
            "countdown_s": countdown_track(est, tick),
        }

    @app.get("/api/envelope")
    def envelope(lat: float, lon: float, seed: int):
        site = _site_or_none(lon, lat)
        if site is None:
            return unprocessable(f"site ({lon}, {lat}) is not a valid coordinate")
        try:
            env = site_envelope(bundle, site, seed)
        except OutOfBoundsError as exc:
            return unprocessable(str(exc))
        return {"dt_s": env.dt, "window_s": env.window, "values": env.values.tolist()}

    return app


def serve(config: ServiceConfig) -> None:
    """Load the bundle (fail fast), then serve until shutdown; 5 s graceful drain."""
    import uvicorn

    bundle = load_bundle(config.bundle_path)
    app = build_app(bundle, cors_allowed=config.cors_allowed)
    uvicorn.run(app, host=config.host, port=config.port, timeout_graceful_shutdown=5)
