import { describe, expect, it } from 'vitest';

import { gainAt, playbackDuration } from '../src/audio.js';
import type { EnvelopePayload } from '../src/types.js';

const ENVELOPE: EnvelopePayload = {
  dt_s: 0.5,
  window_s: 1.0,
  values: [0, 0.25, 1, 0.5, 0],
};

describe('gainAt', () => {
  it('returns the nearest envelope sample', () => {
    expect(gainAt(ENVELOPE, 0)).toBe(0);
    expect(gainAt(ENVELOPE, 0.5)).toBe(0.25);
    expect(gainAt(ENVELOPE, 1.0)).toBe(1);
    expect(gainAt(ENVELOPE, 1.1)).toBe(1); // rounds to frame 2
    expect(gainAt(ENVELOPE, 1.5)).toBe(0.5);
  });

  it('is zero outside the playback window', () => {
    expect(gainAt(ENVELOPE, -0.1)).toBe(0);
    expect(gainAt(ENVELOPE, 99)).toBe(0);
  });

  it('clamps out-of-range samples into [0, 1]', () => {
    const weird: EnvelopePayload = { dt_s: 1, window_s: 1, values: [-0.2, 1.7] };
    expect(gainAt(weird, 0)).toBe(0);
    expect(gainAt(weird, 1)).toBe(1);
  });
});

describe('playbackDuration', () => {
  it('spans first to last sample', () => {
    expect(playbackDuration(ENVELOPE)).toBe(2.0);
    expect(playbackDuration({ dt_s: 0.5, window_s: 1, values: [] })).toBe(0);
    expect(playbackDuration({ dt_s: 0.5, window_s: 1, values: [1] })).toBe(0);
  });
});
