import type { FieldPayload, FieldPoint, SiteCoords } from './types.js';

export function inBounds(field: FieldPayload, site: SiteCoords): boolean {
  const b = field.bounds;
  return site.lon >= b.lon_min && site.lon <= b.lon_max && site.lat >= b.lat_min && site.lat <= b.lat_max;
}

/** Closest lattice point to a site; longitude differences shrink with cos(lat). */
export function nearestPoint(field: FieldPayload, site: SiteCoords): FieldPoint {
  if (field.points.length === 0) throw new Error('field payload has no lattice points');
  const cosLat = Math.cos((site.lat * Math.PI) / 180);
  let best = field.points[0]!;
  let bestD = Infinity;
  for (const point of field.points) {
    const dx = (point.lon - site.lon) * cosLat;
    const dy = point.lat - site.lat;
    const d = dx * dx + dy * dy;
    if (d < bestD) {
      bestD = d;
      best = point;
    }
  }
  return best;
}

export interface Projection {
  toPixel(site: SiteCoords): { x: number; y: number };
  toSite(x: number, y: number): SiteCoords;
}

/** Linear lon/lat <-> pixel mapping; north is up. */
export function makeProjection(field: FieldPayload, width: number, height: number): Projection {
  const b = field.bounds;
  const lonSpan = b.lon_max - b.lon_min;
  const latSpan = b.lat_max - b.lat_min;
  return {
    toPixel(site) {
      return {
        x: ((site.lon - b.lon_min) / lonSpan) * width,
        y: height - ((site.lat - b.lat_min) / latSpan) * height,
      };
    },
    toSite(x, y) {
      return {
        lon: b.lon_min + (x / width) * lonSpan,
        lat: b.lat_min + ((height - y) / height) * latSpan,
      };
    },
  };
}

/** Map color ramp for PGA in g (grey through orange to deep red). */
export function pgaColor(pga: number): string {
  if (pga <= 0) return '#d8d8e0';
  const t = Math.min(pga / 1.1, 1);
  const r = Math.round(255 - 30 * (1 - t));
  const g = Math.round(225 * (1 - t) + 40 * t * (1 - t));
  const bl = Math.round(180 * (1 - t) * (1 - t));
  return `rgb(${r},${g},${bl})`;
}
