"""Acceleration histories and what the drill derives from them.

Covers record parsing, elastic SDOF response by Newmark time integration,
response spectra, peak ground values, the normalized shaking-intensity
envelope that drives audio playback, and a deterministic synthesizer used
when no recorded motions are available for a scenario.

All accelerations are in g; displacements in cm; velocities in cm/s.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .gm_field import IMRecord

G_CMS2 = 980.665  # g -> cm/s^2, single source of truth

# Newmark average-acceleration parameters (unconditionally stable).
_GAMMA = 0.5
_BETA = 0.25

# Synthesizer band and envelope shape.
_SYNTH_F_LO_HZ = 0.2
_SYNTH_F_HI_HZ = 10.0
_SYNTH_RISE_FRAC = 0.15
_SYNTH_FLAT_FRAC = 0.70


class SeriesError(ValueError):
    """Base class for acceleration-record contract violations."""


class MalformedHeaderError(SeriesError):
    pass


class CountMismatchError(SeriesError):
    pass


class NonFiniteSampleError(SeriesError):
    pass


class InvalidConfigError(SeriesError):
    pass


class InvalidWindowError(SeriesError):
    pass


class IntegrationAccuracyWarning(UserWarning):
    """Raised (as a warning) when the record's dt undersamples the oscillator."""


@dataclass(frozen=True, eq=False)
class AccelTimeSeries:
    """Uniformly sampled ground acceleration in g."""

    dt: float
    samples: np.ndarray
    label: str = ""

    def __post_init__(self) -> None:
        if not (math.isfinite(self.dt) and self.dt > 0.0):
            raise InvalidConfigError(f"dt must be positive and finite, got {self.dt}")
        arr = np.asarray(self.samples, dtype=float).copy()
        if arr.ndim != 1 or arr.size < 2:
            raise InvalidConfigError(f"need at least 2 samples, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise NonFiniteSampleError("samples contain non-finite values")
        arr.flags.writeable = False
        object.__setattr__(self, "samples", arr)

    @property
    def duration(self) -> float:
        return (len(self.samples) - 1) * self.dt


@dataclass(frozen=True)
class SDOFConfig:
    """Elastic single-degree-of-freedom oscillator: natural period (s) and damping ratio."""

    period: float
    damping_ratio: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.period) and self.period > 0.0):
            raise InvalidConfigError(f"period must be positive, got {self.period}")
        if not (math.isfinite(self.damping_ratio) and 0.0 < self.damping_ratio < 1.0):
            raise InvalidConfigError(f"damping ratio must be in (0, 1), got {self.damping_ratio}")


@dataclass(frozen=True)
class ResponseResult:
    """Peak oscillator response: relative displacement (cm), absolute acceleration (g), PSA (g)."""

    peak_rel_disp: float
    peak_abs_accel: float
    psa: float


@dataclass(frozen=True, eq=False)
class IntensityEnvelope:
    """Normalized moving-RMS of |acceleration|; values in [0, 1], peak exactly 1 unless silent."""

    dt: float
    values: np.ndarray
    window: float

    def __post_init__(self) -> None:
        arr = np.asarray(self.values, dtype=float).copy()
        arr.flags.writeable = False
        object.__setattr__(self, "values", arr)


def parse_accel(text: str) -> AccelTimeSeries:
    """Parse `NPTS=<u> DT=<f>` followed by whitespace-separated accelerations in g."""
    lines = text.splitlines()
    if not lines or not lines[0].strip():
        raise MalformedHeaderError("line 1: empty record file")
    fields: dict[str, str] = {}
    for token in lines[0].split():
        if "=" not in token:
            raise MalformedHeaderError(f"line 1: bad header token {token!r}")
        key, value = token.split("=", 1)
        fields[key.upper()] = value
    if "NPTS" not in fields or "DT" not in fields:
        raise MalformedHeaderError("line 1: header must declare NPTS and DT")
    try:
        npts = int(fields["NPTS"])
        dt = float(fields["DT"])
    except ValueError as exc:
        raise MalformedHeaderError(f"line 1: {exc}") from exc
    if npts < 2:
        raise MalformedHeaderError(f"line 1: NPTS must be >= 2, got {npts}")
    if not (math.isfinite(dt) and dt > 0.0):
        raise MalformedHeaderError(f"line 1: DT must be positive, got {dt}")

    samples: list[float] = []
    for i, line in enumerate(lines[1:]):
        for token in line.split():
            try:
                value = float(token)
            except ValueError as exc:
                raise NonFiniteSampleError(f"line {i + 2}: bad sample {token!r}") from exc
            if not math.isfinite(value):
                raise NonFiniteSampleError(f"line {i + 2}: non-finite sample {token!r}")
            samples.append(value)
    if len(samples) != npts:
        raise CountMismatchError(f"header declares NPTS={npts}, body has {len(samples)} samples")
    return AccelTimeSeries(dt=dt, samples=np.array(samples), label="")


def newmark_response(ts: AccelTimeSeries, cfg: SDOFConfig) -> ResponseResult:
    """Elastic SDOF response to base acceleration by Newmark average acceleration.

    Solves u'' + 2*zeta*omega*u' + omega^2*u = -a_g(t) from rest, gamma=1/2,
    beta=1/4. Warns (IntegrationAccuracyWarning) when dt > period/10; the
    scheme stays stable, accuracy just degrades.
    """
    if ts.dt > cfg.period / 10.0:
        warnings.warn(
            f"record dt={ts.dt} exceeds T/10={cfg.period / 10.0} for period {cfg.period} s; "
            "response accuracy degraded",
            IntegrationAccuracyWarning,
            stacklevel=2,
        )
    omega = 2.0 * math.pi / cfg.period
    zeta = cfg.damping_ratio
    dt = ts.dt
    k = omega * omega
    c = 2.0 * zeta * omega

    a1 = 1.0 / (_BETA * dt * dt) + _GAMMA * c / (_BETA * dt)
    a2 = 1.0 / (_BETA * dt) + (_GAMMA / _BETA - 1.0) * c
    a3 = (0.5 / _BETA - 1.0) + dt * c * (0.5 * _GAMMA / _BETA - 1.0)
    k_hat = k + a1
    b1 = _GAMMA / (_BETA * dt)
    b2 = 1.0 - _GAMMA / _BETA
    b3 = dt * (1.0 - 0.5 * _GAMMA / _BETA)
    d1 = 1.0 / (_BETA * dt * dt)
    d2 = 1.0 / (_BETA * dt)
    d3 = 0.5 / _BETA - 1.0

    ag = (ts.samples * G_CMS2).tolist()
    u = 0.0
    v = 0.0
    acc = -ag[0]  # from rest: u''(0) = p(0) = -a_g(0)
    peak_u = abs(u)
    peak_abs = abs(acc + ag[0])
    for ag_i in ag[1:]:
        p_i = -ag_i
        u_next = (p_i + a1 * u + a2 * v + a3 * acc) / k_hat
        v_next = b1 * (u_next - u) + b2 * v + b3 * acc
        acc_next = d1 * (u_next - u) - d2 * v - d3 * acc
        u, v, acc = u_next, v_next, acc_next
        if abs(u) > peak_u:
            peak_u = abs(u)
        total = abs(acc + ag_i)
        if total > peak_abs:
            peak_abs = total

    return ResponseResult(
        peak_rel_disp=peak_u,
        peak_abs_accel=peak_abs / G_CMS2,
        psa=omega * omega * peak_u / G_CMS2,
    )


def response_spectrum(
    ts: AccelTimeSeries, periods: list[float], damping: float
) -> list[float]:
    """PSA (g) of the record at each period, same damping ratio throughout."""
    if not periods:
        raise InvalidConfigError("periods list is empty")
    for prev, nxt in zip(periods, periods[1:]):
        if not nxt > prev:
            raise InvalidConfigError(f"periods must be strictly increasing, got {periods}")
    if not all(math.isfinite(p) and p > 0.0 for p in periods):
        raise InvalidConfigError(f"periods must be positive, got {periods}")
    return [newmark_response(ts, SDOFConfig(period, damping)).psa for period in periods]


def peak_ground_values(ts: AccelTimeSeries) -> tuple[float, float]:
    """(pga in g, pgv in cm/s); pgv from the trapezoidal integral of acceleration."""
    samples = ts.samples
    pga = float(np.max(np.abs(samples)))
    increments = 0.5 * ts.dt * (samples[1:] + samples[:-1]) * G_CMS2
    velocity = np.concatenate(([0.0], np.cumsum(increments)))
    pgv = float(np.max(np.abs(velocity)))
    return pga, pgv


def intensity_envelope(ts: AccelTimeSeries, window: float) -> IntensityEnvelope:
    """Centered edge-truncated moving RMS of the record, normalized to peak 1.

    All-zero input yields an all-zero envelope (no division by the zero peak).
    """
    if not (math.isfinite(window) and window > 0.0):
        raise InvalidWindowError(f"window must be positive, got {window}")
    if window < ts.dt:
        raise InvalidWindowError(f"window {window} s shorter than dt {ts.dt} s")
    npts = len(ts.samples)
    width = max(1, math.ceil(window / ts.dt - 1e-9))
    half_lo = (width - 1) // 2
    half_hi = width // 2

    sq = np.concatenate(([0.0], np.cumsum(ts.samples * ts.samples)))
    idx = np.arange(npts)
    lo = np.maximum(idx - half_lo, 0)
    hi = np.minimum(idx + half_hi + 1, npts)
    rms = np.sqrt((sq[hi] - sq[lo]) / (hi - lo))

    peak = float(np.max(rms))
    values = rms / peak if peak > 0.0 else np.zeros(npts)
    return IntensityEnvelope(dt=ts.dt, values=values, window=window)


def synthesize_accel(im: IMRecord, duration: float, dt: float, seed: int) -> AccelTimeSeries:
    """Deterministic stand-in motion: band-limited noise under a trapezoidal envelope.

    Rescaled so max|samples| equals im.pga exactly; a pure function of
    (im, duration, dt, seed).
    """
    if not (math.isfinite(duration) and duration >= 5.0):
        raise InvalidConfigError(f"duration must be >= 5 s, got {duration}")
    if not (math.isfinite(dt) and 0.0 < dt <= 0.02):
        raise InvalidConfigError(f"dt must be in (0, 0.02] s, got {dt}")
    npts = int(round(duration / dt)) + 1
    label = f"synthesized(pga={im.pga},seed={seed})"
    if im.pga == 0.0:
        return AccelTimeSeries(dt=dt, samples=np.zeros(npts), label=label)

    rng = np.random.default_rng(seed)
    noise = rng.standard_normal(npts)
    spectrum = np.fft.rfft(noise)
    freqs = np.fft.rfftfreq(npts, dt)
    spectrum[(freqs < _SYNTH_F_LO_HZ) | (freqs > _SYNTH_F_HI_HZ)] = 0.0
    shaped = np.fft.irfft(spectrum, npts)

    t = np.arange(npts) * dt
    rise_end = _SYNTH_RISE_FRAC * duration
    flat_end = _SYNTH_FLAT_FRAC * duration
    env = np.ones(npts)
    env = np.where(t < rise_end, t / rise_end, env)
    env = np.where(t > flat_end, np.maximum((duration - t) / (duration - flat_end), 0.0), env)
    shaped = shaped * env

    peak = float(np.max(np.abs(shaped)))
    samples = (shaped / peak) * im.pga  # divide first: the peak maps to exactly im.pga
    return AccelTimeSeries(dt=dt, samples=samples, label=label)
