"""Regenerate fixtures/shakeout_demo/grid.txt.

Stand-in scenario field for the demo bundle: PGA decays with distance from a
SE-NW fault trace, the far NW corner is exactly zero (the drill's zero-hazard
region), and the Palm Springs node (-116.5, 33.8) is pinned to 0.9 g.
"""

from __future__ import annotations

import math
from pathlib import Path

NAME = "shakeout_demo"
LON0, LAT0 = -119.5, 33.2
DLON, DLAT = 0.25, 0.2
NCOLS, NROWS = 15, 11
PERIODS = (0.3, 0.5, 1.0)

# Fault trace endpoints (lon, lat), roughly SE-NW through the Coachella Valley.
FAULT_A = (-116.2, 33.4)
FAULT_B = (-117.9, 34.7)

PALM_SPRINGS = (-116.5, 33.8)  # col 12, row 3
PALM_SPRINGS_PGA = 0.9

# IM scalings relative to PGA (stand-in spectral shape).
PGV_PER_PGA = 85.0
PSA_PER_PGA = {0.3: 2.3, 0.5: 1.9, 1.0: 1.1}

KM_PER_DEG = 111.19


def fault_distance_km(lon: float, lat: float) -> float:
    ax, ay = FAULT_A
    bx, by = FAULT_B
    # planar segment distance, degrees scaled to km (lon shrunk by cos(lat))
    cx = math.cos(math.radians(lat))
    px, py = (lon - ax) * cx, lat - ay
    ux, uy = (bx - ax) * cx, by - ay
    t = max(0.0, min(1.0, (px * ux + py * uy) / (ux * ux + uy * uy)))
    dx, dy = px - t * ux, py - t * uy
    return KM_PER_DEG * math.hypot(dx, dy)


def pga_at(lon: float, lat: float) -> float:
    pga = 1.1 * math.exp(-fault_distance_km(lon, lat) / 65.0)
    # cutoff keeps the far SW corner cell exactly zero (the zero-hazard region)
    if pga < 0.08:
        return 0.0
    return round(pga, 4)


def main() -> None:
    lines = [
        f"#GMGRID name={NAME} lon0={LON0} lat0={LAT0} dlon={DLON} dlat={DLAT} "
        f"ncols={NCOLS} nrows={NROWS} periods={','.join(str(p) for p in PERIODS)}"
    ]
    for row in range(NROWS):
        for col in range(NCOLS):
            lon = LON0 + col * DLON
            lat = LAT0 + row * DLAT
            pga = pga_at(lon, lat)
            if (round(lon, 6), round(lat, 6)) == PALM_SPRINGS:
                pga = PALM_SPRINGS_PGA
            pgv = round(PGV_PER_PGA * pga, 4)
            psa = [round(PSA_PER_PGA[p] * pga, 4) for p in PERIODS]
            cols = [round(lon, 6), round(lat, 6), pga, pgv, *psa]
            lines.append(" ".join(str(v) for v in cols))
    out = Path(__file__).resolve().parents[1] / "fixtures" / "shakeout_demo" / "grid.txt"
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text("\n".join(lines) + "\n")
    print(f"wrote {out} ({NCOLS}x{NROWS} nodes)")


if __name__ == "__main__":
    main()
