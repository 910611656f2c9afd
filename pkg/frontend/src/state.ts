// Drill-console state machine. The only legal phase cycle is
// Idle -> Countdown -> Shaking -> Report -> Idle; actions arriving in the
// wrong phase (or carrying a stale request token) leave the state untouched,
// so the reducer can never skip a transition.

import { gainAt } from './audio.js';
import type { FieldPoint, ReportPayload, RoomType, SiteCoords, WarningPayload } from './types.js';

export type DrillPhase = 'Idle' | 'Countdown' | 'Shaking' | 'Report';

export interface ViewState {
  phase: DrillPhase;
  selectedSite: SiteCoords | null;
  selectedPoint: FieldPoint | null;
  room: RoomType;
  seed: number;
  report: ReportPayload | null;
  warning: WarningPayload | null;
  countdownIndex: number;
  audioGain: number;
  error: string | null;
  requestToken: number;
}

export const initialState: ViewState = {
  phase: 'Idle',
  selectedSite: null,
  selectedPoint: null,
  room: 'residence',
  seed: 42,
  report: null,
  warning: null,
  countdownIndex: 0,
  audioGain: 0,
  error: null,
  requestToken: 0,
};

export type Action =
  | { kind: 'site-selected'; site: SiteCoords; point: FieldPoint }
  | { kind: 'site-rejected'; message: string }
  | { kind: 'room-changed'; room: RoomType }
  | { kind: 'seed-changed'; seed: number }
  | { kind: 'drill-requested'; token: number }
  | { kind: 'drill-loaded'; token: number; report: ReportPayload; warning: WarningPayload }
  | { kind: 'drill-failed'; token: number; message: string }
  | { kind: 'countdown-tick' }
  | { kind: 'playback-frame'; t: number }
  | { kind: 'playback-ended' }
  | { kind: 'reset' };

/** Countdown value to display for the current index, clamped at zero. */
export function displayCountdown(values: number[], index: number): number {
  if (values.length === 0) return 0;
  const value = values[Math.min(index, values.length - 1)] ?? 0;
  return value < 0 ? 0 : value;
}

export function reduce(state: ViewState, action: Action): ViewState {
  switch (action.kind) {
    case 'site-selected':
      if (state.phase !== 'Idle') return state;
      return {
        ...state,
        selectedSite: action.site,
        selectedPoint: action.point,
        report: null,
        warning: null,
        error: null,
        requestToken: 0,
      };

    case 'site-rejected':
      if (state.phase !== 'Idle') return state;
      return { ...state, error: action.message };

    case 'room-changed':
      if (state.phase !== 'Idle') return state;
      return { ...state, room: action.room, report: null, warning: null };

    case 'seed-changed':
      if (state.phase !== 'Idle') return state;
      return { ...state, seed: action.seed };

    case 'drill-requested':
      if (state.phase !== 'Idle' || state.selectedSite === null) return state;
      return { ...state, requestToken: action.token, error: null };

    case 'drill-loaded':
      if (state.phase !== 'Idle' || action.token !== state.requestToken) return state;
      return {
        ...state,
        phase: 'Countdown',
        report: action.report,
        warning: action.warning,
        countdownIndex: 0,
        audioGain: 0,
        error: null,
        requestToken: 0,
      };

    case 'drill-failed':
      if (state.phase !== 'Idle' || action.token !== state.requestToken) return state;
      return { ...state, error: action.message, requestToken: 0 };

    case 'countdown-tick': {
      if (state.phase !== 'Countdown') return state;
      const values = state.warning?.countdown_s ?? [0];
      if (state.countdownIndex >= values.length - 1) {
        return { ...state, phase: 'Shaking', audioGain: 0 };
      }
      return { ...state, countdownIndex: state.countdownIndex + 1 };
    }

    case 'playback-frame': {
      if (state.phase !== 'Shaking' || state.report === null) return state;
      return { ...state, audioGain: gainAt(state.report.envelope, action.t) };
    }

    case 'playback-ended':
      if (state.phase !== 'Shaking') return state;
      return { ...state, phase: 'Report', audioGain: 0 };

    case 'reset':
      if (state.phase !== 'Report') return state;
      return {
        ...state,
        phase: 'Idle',
        report: null,
        warning: null,
        countdownIndex: 0,
        audioGain: 0,
      };
  }
}
