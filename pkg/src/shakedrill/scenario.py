"""Drill orchestration: site -> IM -> SDOF response -> damage -> tags, loss, warning.

A ScenarioBundle ties together one ground-motion field, one rupture, a
fragility library, room inventories, and an acceleration source. run_drill
executes the full pipeline for one site and room; monte_carlo_loss repeats
the damage-sampling stage to build loss statistics. Everything is
deterministic given the bundle, site, room, and seed.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

import numpy as np

from . import timeseries
from .early_warning import RuptureScenario, WarningEstimate, arrival_times
from .fragility import (
    ComponentSpec,
    DamagePMF,
    TagColor,
    ds_pmf,
    expected_loss,
    parse_fragility_library,
    sample_ds,
    tag_for,
)
from .gm_field import (
    GroundMotionField,
    IMRecord,
    SitePoint,
    distance_km,
    lookup_im,
    parse_gm_grid,
)
from .timeseries import (
    AccelTimeSeries,
    IntensityEnvelope,
    SDOFConfig,
    intensity_envelope,
    newmark_response,
    parse_accel,
    synthesize_accel,
)

REPORT_SCHEMA = "drill-report/1"
DEFAULT_ENVELOPE_WINDOW_S = 1.0

# Bundles whose epicenter sits farther than this from the grid get a warning.
_EPICENTER_WARN_KM = 500.0


class ScenarioError(ValueError):
    """Base class for drill orchestration failures."""


class ManifestError(ScenarioError):
    pass


class UnknownRoomError(ScenarioError):
    pass


class MissingEDPError(ScenarioError):
    pass


class RoomType(str, Enum):
    RESIDENCE = "residence"
    HOSPITAL = "hospital"


@dataclass(frozen=True)
class RoomInventory:
    """Components present in a room plus the host building's SDOF archetype."""

    room_type: RoomType
    component_ids: tuple[str, ...]
    sdof: SDOFConfig

    def __post_init__(self) -> None:
        if not self.component_ids:
            raise ValueError(f"{self.room_type.value}: component list is empty")


@dataclass(frozen=True)
class SynthesizeSource:
    duration_s: float
    dt_s: float


@dataclass(frozen=True)
class FilesSource:
    directory: Path


AccelSource = SynthesizeSource | FilesSource


@dataclass(frozen=True)
class ScenarioBundle:
    field: GroundMotionField
    rupture: RuptureScenario
    library: tuple[ComponentSpec, ...]
    rooms: dict[RoomType, RoomInventory]
    accel_source: AccelSource
    warnings: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        by_id = {component.id: component for component in self.library}
        for room in self.rooms.values():
            for cid in room.component_ids:
                if cid not in by_id:
                    raise ManifestError(
                        f"room {room.room_type.value!r} references unknown component id {cid!r}"
                    )
        object.__setattr__(self, "_by_id", by_id)

    def component(self, cid: str) -> ComponentSpec:
        return self._by_id[cid]  # type: ignore[attr-defined]


@dataclass(frozen=True)
class ComponentResult:
    component_id: str
    name: str
    pmf: DamagePMF
    sampled_ds: int
    tag: TagColor
    expected_loss: float


@dataclass(frozen=True, eq=False)
class SimulationReport:
    site: SitePoint
    room: RoomType
    im: IMRecord
    edp: dict[str, float]
    components: tuple[ComponentResult, ...]
    total_expected_loss: float
    warning: WarningEstimate
    envelope: IntensityEnvelope
    seed: int
    scenario_name: str
    warnings: tuple[str, ...]


def _site_series(bundle: ScenarioBundle, im: IMRecord, site: SitePoint, seed: int) -> AccelTimeSeries:
    """Ground motion for the site: synthesized, or a recorded shape scaled to the site PGA."""
    source = bundle.accel_source
    if isinstance(source, SynthesizeSource):
        return synthesize_accel(im, source.duration_s, source.dt_s, seed)

    field = bundle.field
    row = min(max(int(round((site.lat - field.origin.lat) / field.dlat)), 0), field.nrows - 1)
    col = min(max(int(round((site.lon - field.origin.lon) / field.dlon)), 0), field.ncols - 1)
    path = source.directory / f"node_r{row}_c{col}.acc"
    if not path.is_file():
        path = source.directory / "default.acc"
    record = parse_accel(path.read_text())
    if im.pga == 0.0:
        return AccelTimeSeries(dt=record.dt, samples=np.zeros(len(record.samples)), label=path.name)
    peak = float(np.max(np.abs(record.samples)))
    if peak == 0.0:
        raise ManifestError(f"record {path} is all zeros; cannot scale to pga {im.pga}")
    return AccelTimeSeries(
        dt=record.dt, samples=(record.samples / peak) * im.pga, label=path.name
    )


def _room_inventory(bundle: ScenarioBundle, room: RoomType | str) -> RoomInventory:
    try:
        room_type = RoomType(room)
    except ValueError:
        raise UnknownRoomError(f"unknown room type {room!r}") from None
    if room_type not in bundle.rooms:
        raise UnknownRoomError(f"room {room_type.value!r} not defined in this bundle")
    return bundle.rooms[room_type]


def _component_pmfs(
    bundle: ScenarioBundle, inventory: RoomInventory, edp: dict[str, float]
) -> list[tuple[ComponentSpec, DamagePMF]]:
    out = []
    for cid in inventory.component_ids:
        component = bundle.component(cid)
        demand = edp.get(component.edp_type.value)
        if demand is None:
            raise MissingEDPError(
                f"component {cid!r} demands {component.edp_type.value}, "
                "which this pipeline cannot produce"
            )
        out.append((component, ds_pmf(component, demand)))
    return out


def _site_demands(
    bundle: ScenarioBundle, inventory: RoomInventory, site: SitePoint, seed: int
) -> tuple[IMRecord, AccelTimeSeries, dict[str, float], list[str]]:
    """IM lookup, ground motion, and the EDP map for one site; collects warnings."""
    im = lookup_im(bundle.field, site)
    series = _site_series(bundle, im, site, seed)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", timeseries.IntegrationAccuracyWarning)
        response = newmark_response(series, inventory.sdof)
    edp = {
        "PFA_g": response.peak_abs_accel,
        "PGA_g": im.pga,
        "PGV_cms": im.pgv,
    }
    return im, series, edp, [str(w.message) for w in caught]


def site_envelope(
    bundle: ScenarioBundle, site: SitePoint, seed: int, window: float = DEFAULT_ENVELOPE_WINDOW_S
) -> IntensityEnvelope:
    """Shaking envelope for a site without running the damage stage."""
    im = lookup_im(bundle.field, site)
    return intensity_envelope(_site_series(bundle, im, site, seed), window)


def run_drill(
    bundle: ScenarioBundle,
    site: SitePoint,
    room: RoomType | str,
    seed: int,
    envelope_window: float = DEFAULT_ENVELOPE_WINDOW_S,
) -> SimulationReport:
    """One full drill: deterministic for fixed (bundle, site, room, seed)."""
    inventory = _room_inventory(bundle, room)
    im, series, edp, integration_warnings = _site_demands(bundle, inventory, site, seed)
    report_warnings = list(bundle.warnings) + integration_warnings

    rng = np.random.default_rng(seed)
    components: list[ComponentResult] = []
    for component, pmf in _component_pmfs(bundle, inventory, edp):
        ds = sample_ds(pmf, rng)
        components.append(
            ComponentResult(
                component_id=component.id,
                name=component.name,
                pmf=pmf,
                sampled_ds=ds,
                tag=tag_for(component, ds),
                expected_loss=expected_loss(component, pmf),
            )
        )

    return SimulationReport(
        site=site,
        room=inventory.room_type,
        im=im,
        edp=edp,
        components=tuple(components),
        total_expected_loss=math.fsum(c.expected_loss for c in components),
        warning=arrival_times(bundle.rupture, site),
        envelope=intensity_envelope(series, envelope_window),
        seed=seed,
        scenario_name=bundle.field.scenario_name,
        warnings=tuple(report_warnings),
    )


def monte_carlo_loss(
    bundle: ScenarioBundle,
    site: SitePoint,
    room: RoomType | str,
    n: int,
    seed: int,
) -> dict[str, float]:
    """Summary statistics of n seeded realizations of total sampled-damage repair cost."""
    if n < 1:
        raise ValueError(f"need n >= 1 draws, got {n}")
    inventory = _room_inventory(bundle, room)
    _, _, edp, _ = _site_demands(bundle, inventory, site, seed)
    pairs = _component_pmfs(bundle, inventory, edp)

    # One uniform per component per realization, components in manifest order;
    # vectorized inverse-CDF keeps the same draw stream as the scalar loop.
    rng = np.random.default_rng(seed)
    u = rng.random((n, len(pairs)))
    losses = np.zeros(n)
    for j, (component, pmf) in enumerate(pairs):
        cumulative = np.cumsum(pmf.probs)
        states = np.searchsorted(cumulative, u[:, j], side="right")
        states = np.minimum(states, component.n_damage_states)
        losses += np.asarray(component.repair_cost)[states]

    std = float(np.std(losses, ddof=1)) if n > 1 else 0.0
    return {
        "mean": float(np.mean(losses)),
        "std": std,
        "p50": float(np.percentile(losses, 50)),
        "p90": float(np.percentile(losses, 90)),
    }


def _manifest_value(manifest: dict, key: str, path: Path):
    if key not in manifest:
        raise ManifestError(f"{path}: manifest missing key {key!r}")
    return manifest[key]


def load_bundle(manifest_path: str | Path) -> ScenarioBundle:
    """Load and cross-validate a bundle manifest; file paths are manifest-relative."""
    path = Path(manifest_path)
    if not path.is_file():
        raise ManifestError(f"manifest not found: {path}")
    try:
        manifest = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ManifestError(f"{path}: not valid JSON: {exc}") from exc
    if not isinstance(manifest, dict):
        raise ManifestError(f"{path}: manifest must be a JSON object")
    base = path.parent

    grid_path = base / str(_manifest_value(manifest, "grid_file", path))
    if not grid_path.is_file():
        raise ManifestError(f"{path}: grid file not found: {grid_path}")
    try:
        field = parse_gm_grid(grid_path.read_text())
    except ValueError as exc:
        raise type(exc)(f"{grid_path}: {exc}") from exc

    library_path = base / str(_manifest_value(manifest, "fragility_library", path))
    if not library_path.is_file():
        raise ManifestError(f"{path}: fragility library not found: {library_path}")
    try:
        library = parse_fragility_library(library_path.read_text())
    except ValueError as exc:
        raise type(exc)(f"{library_path}: {exc}") from exc

    rupture_raw = _manifest_value(manifest, "rupture", path)
    try:
        rupture = RuptureScenario(
            epicenter=SitePoint(
                float(rupture_raw["epicenter_lon"]), float(rupture_raw["epicenter_lat"])
            ),
            p_speed=float(rupture_raw.get("p_speed_kms", 6.0)),
            s_speed=float(rupture_raw.get("s_speed_kms", 3.2)),
            alert_latency=float(rupture_raw.get("alert_latency_s", 5.0)),
            origin_time=float(rupture_raw.get("origin_time_s", 0.0)),
            name=str(rupture_raw.get("name", field.scenario_name)),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ManifestError(f"{path}: bad rupture block: {exc}") from exc

    rooms_raw = _manifest_value(manifest, "rooms", path)
    if not isinstance(rooms_raw, dict) or not rooms_raw:
        raise ManifestError(f"{path}: rooms must be a non-empty object")
    rooms: dict[RoomType, RoomInventory] = {}
    known_ids = {component.id for component in library}
    for key, room_raw in rooms_raw.items():
        try:
            room_type = RoomType(key)
        except ValueError:
            raise ManifestError(f"{path}: unknown room type {key!r}") from None
        try:
            component_ids = tuple(str(c) for c in room_raw["components"])
            sdof = SDOFConfig(
                period=float(room_raw["period_s"]),
                damping_ratio=float(room_raw["damping"]),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ManifestError(f"{path}: bad room {key!r}: {exc}") from exc
        if not component_ids:
            raise ManifestError(f"{path}: room {key!r} has no components")
        for cid in component_ids:
            if cid not in known_ids:
                raise ManifestError(f"{path}: room {key!r} references unknown component id {cid!r}")
        rooms[room_type] = RoomInventory(room_type=room_type, component_ids=component_ids, sdof=sdof)

    source_raw = _manifest_value(manifest, "accel_source", path)
    mode = source_raw.get("mode") if isinstance(source_raw, dict) else None
    accel_source: AccelSource
    if mode == "synthesize":
        try:
            accel_source = SynthesizeSource(
                duration_s=float(source_raw.get("duration_s", 20.0)),
                dt_s=float(source_raw.get("dt_s", 0.01)),
            )
        except (TypeError, ValueError) as exc:
            raise ManifestError(f"{path}: bad accel_source: {exc}") from exc
        if accel_source.duration_s < 5.0 or not 0.0 < accel_source.dt_s <= 0.02:
            raise ManifestError(
                f"{path}: synthesize needs duration >= 5 s and dt in (0, 0.02] s, "
                f"got {accel_source.duration_s}, {accel_source.dt_s}"
            )
    elif mode == "files":
        directory = base / str(source_raw.get("dir", "records"))
        if not directory.is_dir():
            raise ManifestError(f"{path}: accel record directory not found: {directory}")
        if not (directory / "default.acc").is_file():
            raise ManifestError(f"{path}: accel record directory missing default.acc: {directory}")
        accel_source = FilesSource(directory=directory)
    else:
        raise ManifestError(f"{path}: accel_source mode must be 'files' or 'synthesize', got {mode!r}")

    bundle_warnings: list[str] = []
    lon_min, lon_max, lat_min, lat_max = field.bounds()
    nearest = SitePoint(
        min(max(rupture.epicenter.lon, lon_min), lon_max),
        min(max(rupture.epicenter.lat, lat_min), lat_max),
    )
    gap = distance_km(rupture.epicenter, nearest)
    if gap > _EPICENTER_WARN_KM:
        bundle_warnings.append(
            f"epicenter is {gap:.0f} km from the ground-motion grid (> {_EPICENTER_WARN_KM:.0f} km)"
        )

    return ScenarioBundle(
        field=field,
        rupture=rupture,
        library=tuple(library),
        rooms=rooms,
        accel_source=accel_source,
        warnings=tuple(bundle_warnings),
    )


def report_to_text(report: SimulationReport) -> str:
    """Serialize a report to stable, key-ordered JSON; floats keep full precision."""
    payload = {
        "schema": REPORT_SCHEMA,
        "scenario": report.scenario_name,
        "site": {"lon": report.site.lon, "lat": report.site.lat},
        "room": report.room.value,
        "seed": report.seed,
        "im": {
            "pga_g": report.im.pga,
            "pgv_cms": report.im.pgv,
            "psa_g": {repr(period): sa for period, sa in report.im.psa.items()},
        },
        "edp": dict(report.edp),
        "components": [
            {
                "id": c.component_id,
                "name": c.name,
                "pmf": list(c.pmf.probs),
                "sampled_ds": c.sampled_ds,
                "tag": c.tag.value,
                "expected_loss": c.expected_loss,
            }
            for c in report.components
        ],
        "total_expected_loss": report.total_expected_loss,
        "warning": {
            "distance_km": report.warning.distance_km,
            "p_arrival_s": report.warning.p_arrival,
            "s_arrival_s": report.warning.s_arrival,
            "warning_time_s": report.warning.warning_time,
        },
        "envelope": {
            "dt_s": report.envelope.dt,
            "window_s": report.envelope.window,
            "values": report.envelope.values.tolist(),
        },
        "warnings": list(report.warnings),
    }
    return json.dumps(payload, indent=2) + "\n"


def report_from_text(text: str) -> SimulationReport:
    """Inverse of report_to_text."""
    payload = json.loads(text)
    if payload.get("schema") != REPORT_SCHEMA:
        raise ScenarioError(f"unsupported report schema {payload.get('schema')!r}")
    components = tuple(
        ComponentResult(
            component_id=c["id"],
            name=c["name"],
            pmf=DamagePMF(probs=tuple(c["pmf"])),
            sampled_ds=int(c["sampled_ds"]),
            tag=TagColor(c["tag"]),
            expected_loss=float(c["expected_loss"]),
        )
        for c in payload["components"]
    )
    w = payload["warning"]
    e = payload["envelope"]
    return SimulationReport(
        site=SitePoint(float(payload["site"]["lon"]), float(payload["site"]["lat"])),
        room=RoomType(payload["room"]),
        im=IMRecord(
            pga=float(payload["im"]["pga_g"]),
            pgv=float(payload["im"]["pgv_cms"]),
            psa={float(k): float(v) for k, v in payload["im"]["psa_g"].items()},
        ),
        edp={k: float(v) for k, v in payload["edp"].items()},
        components=components,
        total_expected_loss=float(payload["total_expected_loss"]),
        warning=WarningEstimate(
            distance_km=float(w["distance_km"]),
            p_arrival=float(w["p_arrival_s"]),
            s_arrival=float(w["s_arrival_s"]),
            warning_time=float(w["warning_time_s"]),
        ),
        envelope=IntensityEnvelope(
            dt=float(e["dt_s"]), values=np.array(e["values"], dtype=float), window=float(e["window_s"])
        ),
        seed=int(payload["seed"]),
        scenario_name=str(payload["scenario"]),
        warnings=tuple(payload["warnings"]),
    )
