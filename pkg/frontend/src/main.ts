// Console bootstrap: wires the map, drill controls, countdown, playback, and
// report panel to the state machine. Everything displayed comes from service
// payloads; this file only schedules fetches, timers, and DOM updates.

import { DrillApi } from './api.js';
import { RumbleAudio, playbackDuration } from './audio.js';
import { inBounds, makeProjection, nearestPoint, pgaColor, type Projection } from './map.js';
import { displayCountdown, initialState, reduce, type Action, type ViewState } from './state.js';
import { renderTags, tagViews } from './tags.js';
import type { FieldPayload, RoomType } from './types.js';

// Engine base URL: same origin by default, or ?api=http://host:port when the
// console is served by a separate static host (run the engine with --cors).
const apiBase = new URLSearchParams(window.location.search).get('api') ?? '';
const api = new DrillApi(apiBase);
const audio = new RumbleAudio();

let state: ViewState = initialState;
let field: FieldPayload | null = null;
let projection: Projection | null = null;
let tokenCounter = 0;
let countdownTimer: number | null = null;
let playbackHandle: number | null = null;

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (node === null) throw new Error(`missing element #${id}`);
  return node as T;
}

const canvas = el<HTMLCanvasElement>('map');
const markerInfo = el<HTMLElement>('marker-info');
const inlineError = el<HTMLElement>('inline-error');
const phaseLabel = el<HTMLElement>('phase-label');
const countdownPanel = el<HTMLElement>('countdown-panel');
const countdownValue = el<HTMLElement>('countdown-value');
const tagsPanel = el<HTMLElement>('tags-panel');
const tagList = el<HTMLElement>('tag-list');
const lossSummary = el<HTMLElement>('loss-summary');
const startButton = el<HTMLButtonElement>('start-drill');
const resetButton = el<HTMLButtonElement>('new-drill');
const roomSelect = el<HTMLSelectElement>('room-select');
const seedInput = el<HTMLInputElement>('seed-input');
const shakingPanel = el<HTMLElement>('shaking-panel');
const gainMeter = el<HTMLElement>('gain-meter');

function dispatch(action: Action): void {
  const next = reduce(state, action);
  const phaseChanged = next.phase !== state.phase;
  state = next;
  if (phaseChanged) onPhaseChange();
  render();
}

function onPhaseChange(): void {
  if (countdownTimer !== null) {
    window.clearInterval(countdownTimer);
    countdownTimer = null;
  }
  if (playbackHandle !== null) {
    window.cancelAnimationFrame(playbackHandle);
    playbackHandle = null;
  }
  if (state.phase === 'Countdown') {
    countdownTimer = window.setInterval(() => dispatch({ kind: 'countdown-tick' }), 1000);
  } else if (state.phase === 'Shaking') {
    audio.start();
    const started = performance.now();
    const duration = state.report ? playbackDuration(state.report.envelope) : 0;
    const frame = () => {
      const t = (performance.now() - started) / 1000;
      if (t > duration) {
        dispatch({ kind: 'playback-ended' });
        return;
      }
      dispatch({ kind: 'playback-frame', t });
      playbackHandle = window.requestAnimationFrame(frame);
    };
    playbackHandle = window.requestAnimationFrame(frame);
  } else {
    audio.setGain(0);
  }
}

function drawMap(): void {
  if (field === null || projection === null) return;
  const ctx = canvas.getContext('2d');
  if (ctx === null) return;
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  const cellW = (canvas.width / (field.ncols / field.stride)) * 0.95;
  const cellH = (canvas.height / (field.nrows / field.stride)) * 0.95;
  for (const point of field.points) {
    const { x, y } = projection.toPixel(point);
    ctx.fillStyle = pgaColor(point.pga_g);
    ctx.fillRect(x - cellW / 2, y - cellH / 2, cellW, cellH);
  }
  const epi = projection.toPixel(field.epicenter);
  ctx.strokeStyle = '#7a0000';
  ctx.lineWidth = 2;
  ctx.beginPath();
  ctx.moveTo(epi.x - 6, epi.y - 6);
  ctx.lineTo(epi.x + 6, epi.y + 6);
  ctx.moveTo(epi.x + 6, epi.y - 6);
  ctx.lineTo(epi.x - 6, epi.y + 6);
  ctx.stroke();
  if (state.selectedSite !== null) {
    const { x, y } = projection.toPixel(state.selectedSite);
    ctx.fillStyle = '#1344c0';
    ctx.beginPath();
    ctx.arc(x, y, 6, 0, 2 * Math.PI);
    ctx.fill();
    ctx.strokeStyle = '#ffffff';
    ctx.lineWidth = 1.5;
    ctx.stroke();
  }
}

function render(): void {
  phaseLabel.textContent = state.phase;
  inlineError.textContent = state.error ?? '';
  inlineError.hidden = state.error === null;

  if (state.selectedPoint !== null && state.selectedSite !== null) {
    markerInfo.textContent =
      `site (${state.selectedSite.lon.toFixed(3)}, ${state.selectedSite.lat.toFixed(3)})` +
      `  nearest node PGA ${state.selectedPoint.pga_g.toFixed(3)} g, ` +
      `PGV ${state.selectedPoint.pgv_cms.toFixed(1)} cm/s`;
  } else {
    markerInfo.textContent = 'Click the map to place the drill site.';
  }

  startButton.disabled = state.phase !== 'Idle' || state.selectedSite === null;
  resetButton.hidden = state.phase !== 'Report';
  roomSelect.disabled = state.phase !== 'Idle';
  seedInput.disabled = state.phase !== 'Idle';

  countdownPanel.hidden = state.phase !== 'Countdown';
  if (state.phase === 'Countdown') {
    const values = state.warning?.countdown_s ?? [0];
    countdownValue.textContent = displayCountdown(values, state.countdownIndex).toFixed(0);
  }

  shakingPanel.hidden = state.phase !== 'Shaking';
  if (state.phase === 'Shaking') {
    audio.setGain(state.audioGain);
    gainMeter.style.width = `${(state.audioGain * 100).toFixed(1)}%`;
  }

  tagsPanel.hidden = state.phase !== 'Report';
  if (state.phase === 'Report' && state.report !== null) {
    try {
      renderTags(tagList, tagViews(state.report));
      lossSummary.textContent =
        `Expected loss $${state.report.total_expected_loss.toFixed(0)} ` +
        `(seed ${state.report.seed}, ${state.report.room})`;
    } catch (err) {
      tagList.replaceChildren();
      lossSummary.textContent = '';
      state = { ...state, error: String(err) };
      inlineError.textContent = state.error;
      inlineError.hidden = false;
    }
  }
  drawMap();
}

function onMapClick(event: MouseEvent): void {
  if (field === null || projection === null) return;
  const rect = canvas.getBoundingClientRect();
  const x = ((event.clientX - rect.left) / rect.width) * canvas.width;
  const y = ((event.clientY - rect.top) / rect.height) * canvas.height;
  const site = projection.toSite(x, y);
  if (!inBounds(field, site)) {
    dispatch({ kind: 'site-rejected', message: 'That point is outside the scenario grid.' });
    return;
  }
  dispatch({ kind: 'site-selected', site, point: nearestPoint(field, site) });
}

async function startDrill(): Promise<void> {
  if (state.selectedSite === null) return;
  const token = ++tokenCounter;
  const site = state.selectedSite;
  dispatch({ kind: 'drill-requested', token });
  try {
    const [report, warning] = await Promise.all([
      api.report(site, state.room, state.seed),
      api.warning(site),
    ]);
    dispatch({ kind: 'drill-loaded', token, report, warning });
  } catch (err) {
    dispatch({ kind: 'drill-failed', token, message: `Drill request failed: ${String(err)}` });
  }
}

async function bootstrap(): Promise<void> {
  field = await api.field();
  projection = makeProjection(field, canvas.width, canvas.height);
  el<HTMLElement>('scenario-name').textContent = field.scenario;

  canvas.addEventListener('click', onMapClick);
  startButton.addEventListener('click', () => void startDrill());
  resetButton.addEventListener('click', () => dispatch({ kind: 'reset' }));
  roomSelect.addEventListener('change', () =>
    dispatch({ kind: 'room-changed', room: roomSelect.value as RoomType }),
  );
  seedInput.addEventListener('change', () => {
    const seed = Number.parseInt(seedInput.value, 10);
    if (Number.isFinite(seed)) dispatch({ kind: 'seed-changed', seed });
  });
  render();
}

void bootstrap().catch((err) => {
  inlineError.textContent = `Could not reach the drill service: ${String(err)}`;
  inlineError.hidden = false;
});
