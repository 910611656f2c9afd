// Payload shapes mirroring the engine's HTTP API. The console never computes
// damage, loss, or timing itself; everything rendered comes from these fields.

export interface SiteCoords {
  lon: number;
  lat: number;
}

export interface FieldPoint {
  lon: number;
  lat: number;
  pga_g: number;
  pgv_cms: number;
}

export interface FieldBounds {
  lon_min: number;
  lon_max: number;
  lat_min: number;
  lat_max: number;
}

export interface FieldPayload {
  scenario: string;
  bounds: FieldBounds;
  dlon: number;
  dlat: number;
  ncols: number;
  nrows: number;
  periods: number[];
  stride: number;
  points: FieldPoint[];
  epicenter: SiteCoords;
}

export interface ComponentPayload {
  id: string;
  name: string;
  pmf: number[];
  sampled_ds: number;
  tag: string;
  expected_loss: number;
}

export interface WarningFields {
  distance_km: number;
  p_arrival_s: number;
  s_arrival_s: number;
  warning_time_s: number;
}

export interface WarningPayload extends WarningFields {
  countdown_s: number[];
}

export interface EnvelopePayload {
  dt_s: number;
  window_s: number;
  values: number[];
}

export interface ReportPayload {
  schema: string;
  scenario: string;
  site: SiteCoords;
  room: string;
  seed: number;
  im: { pga_g: number; pgv_cms: number; psa_g: Record<string, number> };
  edp: Record<string, number>;
  components: ComponentPayload[];
  total_expected_loss: number;
  warning: WarningFields;
  envelope: EnvelopePayload;
  warnings: string[];
}

export type RoomType = 'residence' | 'hospital';
