import type { EnvelopePayload } from './types.js';

/**
 * Audio gain at a playback instant: the envelope sample nearest to t,
 * clamped into [0, 1]. Outside the envelope (t < 0 or past the end) gain is 0.
 */
export function gainAt(envelope: EnvelopePayload, tSeconds: number): number {
  if (envelope.values.length === 0 || tSeconds < 0 || envelope.dt_s <= 0) return 0;
  const frame = Math.round(tSeconds / envelope.dt_s);
  if (frame >= envelope.values.length) return 0;
  const value = envelope.values[frame] ?? 0;
  return value < 0 ? 0 : value > 1 ? 1 : value;
}

/** Seconds from the first to the last envelope sample. */
export function playbackDuration(envelope: EnvelopePayload): number {
  return envelope.values.length > 1 ? (envelope.values.length - 1) * envelope.dt_s : 0;
}

/**
 * Baseline rumble played under the drill, volume-modulated by the envelope.
 * The loop is synthesized brown noise, so no audio recording ships with the
 * console. Construction is lazy: browsers require a user gesture before an
 * AudioContext may start.
 */
export class RumbleAudio {
  private ctx: AudioContext | null = null;
  private gain: GainNode | null = null;
  private source: AudioBufferSourceNode | null = null;

  start(): void {
    if (this.ctx !== null) return;
    const ctx = new AudioContext();
    const seconds = 2;
    const buffer = ctx.createBuffer(1, ctx.sampleRate * seconds, ctx.sampleRate);
    const data = buffer.getChannelData(0);
    let last = 0;
    for (let i = 0; i < data.length; i++) {
      const white = Math.random() * 2 - 1;
      last = (last + 0.02 * white) / 1.02; // leaky integrator: brown noise
      data[i] = last * 3.5;
    }
    const source = ctx.createBufferSource();
    source.buffer = buffer;
    source.loop = true;
    const gain = ctx.createGain();
    gain.gain.value = 0;
    source.connect(gain).connect(ctx.destination);
    source.start();
    this.ctx = ctx;
    this.gain = gain;
    this.source = source;
  }

  setGain(value: number): void {
    if (this.gain === null || this.ctx === null) return;
    const clamped = value < 0 ? 0 : value > 1 ? 1 : value;
    this.gain.gain.setTargetAtTime(clamped, this.ctx.currentTime, 0.02);
  }

  stop(): void {
    this.source?.stop();
    void this.ctx?.close();
    this.ctx = null;
    this.gain = null;
    this.source = null;
  }
}
