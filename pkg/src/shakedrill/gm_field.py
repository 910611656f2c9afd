"""Scenario ground-motion grid: parsing, bilinear IM lookup, geographic distance.

The grid is a regular lon/lat lattice of intensity-measure records for a single
earthquake scenario. Rows run south to north, columns west to east, stored
row-major. Fields are immutable after parsing, so every operation here is pure
and safe for concurrent readers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

EARTH_RADIUS_KM = 6371.0

# Snap tolerance (in cell units) so sites computed from node coordinates land
# exactly on the node despite float round-off.
_NODE_SNAP = 1e-9


class GridError(ValueError):
    """Base class for ground-motion grid contract violations."""


class MalformedHeaderError(GridError):
    pass


class RowCountMismatchError(GridError):
    pass


class NegativeIMError(GridError):
    pass


class InconsistentPeriodSetError(GridError):
    pass


class OutOfBoundsError(GridError):
    pass


@dataclass(frozen=True)
class SitePoint:
    """A geographic point: lon in degrees east (-180, 180], lat in degrees north [-90, 90]."""

    lon: float
    lat: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.lon) and math.isfinite(self.lat)):
            raise ValueError(f"site coordinates must be finite, got ({self.lon}, {self.lat})")
        if not -180.0 < self.lon <= 180.0:
            raise ValueError(f"lon {self.lon} outside (-180, 180]")
        if not -90.0 <= self.lat <= 90.0:
            raise ValueError(f"lat {self.lat} outside [-90, 90]")


@dataclass(frozen=True)
class IMRecord:
    """Intensity measures at one site: PGA (g), PGV (cm/s), and PSA (g) keyed by period (s)."""

    pga: float
    pgv: float
    psa: dict[float, float]

    def __post_init__(self) -> None:
        for label, value in (("pga", self.pga), ("pgv", self.pgv)):
            if not math.isfinite(value) or value < 0.0:
                raise ValueError(f"{label} must be finite and non-negative, got {value}")
        periods = list(self.psa)
        for prev, nxt in zip(periods, periods[1:]):
            if not nxt > prev:
                raise ValueError(f"psa periods must be strictly increasing, got {periods}")
        for period, value in self.psa.items():
            if not (math.isfinite(period) and period > 0.0):
                raise ValueError(f"psa period must be positive, got {period}")
            if not math.isfinite(value) or value < 0.0:
                raise ValueError(f"psa({period}) must be finite and non-negative, got {value}")


@dataclass(frozen=True)
class GroundMotionField:
    """Regular lon/lat grid of IMRecords, row-major, rows south->north, columns west->east."""

    origin: SitePoint
    dlon: float
    dlat: float
    ncols: int
    nrows: int
    cells: tuple[IMRecord, ...]
    scenario_name: str

    def __post_init__(self) -> None:
        if not (self.dlon > 0.0 and self.dlat > 0.0):
            raise ValueError(f"dlon/dlat must be positive, got {self.dlon}, {self.dlat}")
        if self.ncols < 2 or self.nrows < 2:
            raise ValueError(f"grid needs at least 2x2 nodes, got {self.ncols}x{self.nrows}")
        if len(self.cells) != self.ncols * self.nrows:
            raise ValueError(
                f"cell count {len(self.cells)} != ncols*nrows = {self.ncols * self.nrows}"
            )
        period_set = self.periods
        for i, cell in enumerate(self.cells):
            if tuple(cell.psa) != period_set:
                raise ValueError(f"cell {i} psa periods differ from the field's period set")

    @property
    def periods(self) -> tuple[float, ...]:
        return tuple(self.cells[0].psa)

    def node(self, row: int, col: int) -> IMRecord:
        return self.cells[row * self.ncols + col]

    def node_site(self, row: int, col: int) -> SitePoint:
        return SitePoint(self.origin.lon + col * self.dlon, self.origin.lat + row * self.dlat)

    def bounds(self) -> tuple[float, float, float, float]:
        """(lon_min, lon_max, lat_min, lat_max) of the closed bounding box."""
        return (
            self.origin.lon,
            self.origin.lon + (self.ncols - 1) * self.dlon,
            self.origin.lat,
            self.origin.lat + (self.nrows - 1) * self.dlat,
        )

    def contains(self, site: SitePoint) -> bool:
        lon_min, lon_max, lat_min, lat_max = self.bounds()
        return lon_min <= site.lon <= lon_max and lat_min <= site.lat <= lat_max


def parse_gm_grid(text: str) -> GroundMotionField:
    """Parse the grid file format into a validated GroundMotionField.

    Line 1 is a `#GMGRID key=value ...` header; then ncols*nrows data lines
    `lon lat pga_g pgv_cms psa1_g ...`, row-major south->north.
    """
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise MalformedHeaderError("line 1: empty grid file")
    header = lines[0].strip()
    if not header.startswith("#GMGRID"):
        raise MalformedHeaderError("line 1: missing #GMGRID header")

    fields: dict[str, str] = {}
    for token in header.split()[1:]:
        if "=" not in token:
            raise MalformedHeaderError(f"line 1: bad header token {token!r}")
        key, value = token.split("=", 1)
        fields[key] = value
    required = ("name", "lon0", "lat0", "dlon", "dlat", "ncols", "nrows", "periods")
    missing = [key for key in required if key not in fields]
    if missing:
        raise MalformedHeaderError(f"line 1: header missing {', '.join(missing)}")

    try:
        lon0 = float(fields["lon0"])
        lat0 = float(fields["lat0"])
        dlon = float(fields["dlon"])
        dlat = float(fields["dlat"])
        ncols = int(fields["ncols"])
        nrows = int(fields["nrows"])
        periods = tuple(float(p) for p in fields["periods"].split(",") if p)
    except ValueError as exc:
        raise MalformedHeaderError(f"line 1: {exc}") from exc
    if any(not b > a for a, b in zip(periods, periods[1:])):
        raise MalformedHeaderError(f"line 1: periods not strictly increasing: {periods}")
    if dlon <= 0 or dlat <= 0 or ncols < 2 or nrows < 2:
        raise MalformedHeaderError(
            f"line 1: need dlon,dlat > 0 and ncols,nrows >= 2, got "
            f"dlon={dlon} dlat={dlat} ncols={ncols} nrows={nrows}"
        )

    body = lines[1:]
    expected = ncols * nrows
    if len(body) != expected:
        raise RowCountMismatchError(
            f"line {len(lines)}: header declares {expected} cells, body has {len(body)} rows"
        )

    ncolumns = 4 + len(periods)
    cells: list[IMRecord] = []
    for i, line in enumerate(body):
        lineno = i + 2
        tokens = line.split()
        if len(tokens) != ncolumns:
            raise InconsistentPeriodSetError(
                f"line {lineno}: expected {ncolumns} columns for {len(periods)} periods, "
                f"got {len(tokens)}"
            )
        try:
            values = [float(tok) for tok in tokens]
        except ValueError as exc:
            raise NegativeIMError(f"line {lineno}: {exc}") from exc
        ims = values[2:]
        for value in ims:
            if not math.isfinite(value) or value < 0.0:
                raise NegativeIMError(f"line {lineno}: IM value {value} not finite/non-negative")
        cells.append(IMRecord(pga=ims[0], pgv=ims[1], psa=dict(zip(periods, ims[2:]))))

    return GroundMotionField(
        origin=SitePoint(lon0, lat0),
        dlon=dlon,
        dlat=dlat,
        ncols=ncols,
        nrows=nrows,
        cells=tuple(cells),
        scenario_name=fields["name"],
    )


def serialize_gm_grid(field: GroundMotionField) -> str:
    """Inverse of parse_gm_grid; floats use repr so a reparse is bit-exact."""
    header = (
        f"#GMGRID name={field.scenario_name} lon0={field.origin.lon!r} lat0={field.origin.lat!r} "
        f"dlon={field.dlon!r} dlat={field.dlat!r} ncols={field.ncols} nrows={field.nrows} "
        f"periods={','.join(repr(p) for p in field.periods)}"
    )
    out = [header]
    for row in range(field.nrows):
        for col in range(field.ncols):
            cell = field.node(row, col)
            site = field.node_site(row, col)
            columns = [site.lon, site.lat, cell.pga, cell.pgv, *cell.psa.values()]
            out.append(" ".join(repr(v) for v in columns))
    return "\n".join(out) + "\n"


def _cell_fraction(value: float, origin: float, step: float, count: int) -> tuple[int, float]:
    """Map a coordinate to (lower node index, fraction in [0, 1]) with node snapping."""
    f = (value - origin) / step
    nearest = round(f)
    if abs(f - nearest) < _NODE_SNAP:
        f = float(nearest)
    idx = min(int(math.floor(f)), count - 2)
    idx = max(idx, 0)
    return idx, f - idx


def lookup_im(field: GroundMotionField, site: SitePoint) -> IMRecord:
    """Bilinear blend of the four nodes enclosing the site.

    Exact at grid nodes; raises OutOfBoundsError outside the closed bounding box.
    """
    if not field.contains(site):
        lon_min, lon_max, lat_min, lat_max = field.bounds()
        raise OutOfBoundsError(
            f"site ({site.lon}, {site.lat}) out of bounds "
            f"[{lon_min}, {lon_max}] x [{lat_min}, {lat_max}]"
        )
    col, tx = _cell_fraction(site.lon, field.origin.lon, field.dlon, field.ncols)
    row, ty = _cell_fraction(site.lat, field.origin.lat, field.dlat, field.nrows)

    c00 = field.node(row, col)
    c10 = field.node(row, col + 1)
    c01 = field.node(row + 1, col)
    c11 = field.node(row + 1, col + 1)
    w00 = (1.0 - tx) * (1.0 - ty)
    w10 = tx * (1.0 - ty)
    w01 = (1.0 - tx) * ty
    w11 = tx * ty

    def blend(v00: float, v10: float, v01: float, v11: float) -> float:
        return w00 * v00 + w10 * v10 + w01 * v01 + w11 * v11

    psa = {
        period: blend(c00.psa[period], c10.psa[period], c01.psa[period], c11.psa[period])
        for period in field.periods
    }
    return IMRecord(
        pga=blend(c00.pga, c10.pga, c01.pga, c11.pga),
        pgv=blend(c00.pgv, c10.pgv, c01.pgv, c11.pgv),
        psa=psa,
    )


def distance_km(a: SitePoint, b: SitePoint) -> float:
    """Haversine great-circle distance on a sphere of radius 6371.0 km."""
    lat1 = math.radians(a.lat)
    lat2 = math.radians(b.lat)
    dlat = math.radians(b.lat - a.lat)
    dlon = math.radians(b.lon - a.lon)
    h = math.sin(dlat / 2.0) ** 2 + math.cos(lat1) * math.cos(lat2) * math.sin(dlon / 2.0) ** 2
    return 2.0 * EARTH_RADIUS_KM * math.atan2(math.sqrt(h), math.sqrt(1.0 - h))
