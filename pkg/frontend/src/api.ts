import type {
  EnvelopePayload,
  FieldPayload,
  ReportPayload,
  RoomType,
  SiteCoords,
  WarningPayload,
} from './types.js';

export class ApiError extends Error {
  constructor(
    readonly status: number,
    message: string,
  ) {
    super(message);
    this.name = 'ApiError';
  }
}

export interface FetchResponse {
  ok: boolean;
  status: number;
  text(): Promise<string>;
}

export type FetchLike = (url: string) => Promise<FetchResponse>;

/** Thin typed client for the drill engine's HTTP API. */
export class DrillApi {
  private readonly fetchFn: FetchLike;

  constructor(
    private readonly baseUrl: string = '',
    fetchFn?: FetchLike,
  ) {
    this.fetchFn = fetchFn ?? ((url) => fetch(url));
  }

  private async getJson<T>(path: string, params: Record<string, string | number | boolean>): Promise<T> {
    const query = new URLSearchParams();
    for (const [key, value] of Object.entries(params)) {
      query.set(key, String(value));
    }
    const suffix = query.size > 0 ? `?${query.toString()}` : '';
    const response = await this.fetchFn(`${this.baseUrl}${path}${suffix}`);
    const body = await response.text();
    if (!response.ok) {
      let detail = body;
      try {
        detail = (JSON.parse(body) as { error?: string }).error ?? body;
      } catch {
        // non-JSON error body; keep raw text
      }
      throw new ApiError(response.status, detail);
    }
    return JSON.parse(body) as T;
  }

  health(): Promise<{ status: string; scenario: string }> {
    return this.getJson('/api/health', {});
  }

  field(full = false): Promise<FieldPayload> {
    return this.getJson('/api/field', full ? { full } : {});
  }

  report(site: SiteCoords, room: RoomType, seed: number): Promise<ReportPayload> {
    return this.getJson('/api/report', { lat: site.lat, lon: site.lon, room, seed });
  }

  warning(site: SiteCoords, tick = 1.0): Promise<WarningPayload> {
    return this.getJson('/api/warning', { lat: site.lat, lon: site.lon, tick });
  }

  envelope(site: SiteCoords, seed: number): Promise<EnvelopePayload> {
    return this.getJson('/api/envelope', { lat: site.lat, lon: site.lon, seed });
  }
}
