"""Test excitations and a simulated wireless sensor.

Two signal families mirror the lab inputs: pure sinusoids (with an exact
analytic displacement oracle) and train-crossing surrogates built from
raised-cosine axle pulses (band-limited, with their own analytic oracle).
The sensor simulator turns a series into a timed, optionally lossy record
stream, deterministic per seed.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DomainError
from .recon import AccelerationSeries, DisplacementSeries


class SignalKind(str, Enum):
    SINUSOID = "sinusoid"
    TRAIN_CROSSING = "train_crossing"


@dataclass(frozen=True)
class SignalSpec:
    kind: SignalKind
    duration_s: float = 20.0
    sample_rate_hz: float = 300.0
    noise_rms: float = 0.0  # m/s^2
    # sinusoid parameters
    frequency_hz: float = 1.0
    amplitude_mm: float = 1.0
    # train parameters
    speed_kmh: float = 24.9
    axle_count: int = 6
    axle_spacing_m: float = 15.0
    axle_amplitude_mm: float = 3.0

    def __post_init__(self):
        if self.duration_s <= 0:
            raise DomainError("duration_s must be > 0")
        if self.sample_rate_hz <= 0:
            raise DomainError("sample_rate_hz must be > 0")
        kind = SignalKind(self.kind)
        object.__setattr__(self, "kind", kind)
        if kind is SignalKind.SINUSOID:
            if self.frequency_hz <= 0:
                raise DomainError("frequency_hz must be > 0")
            if self.amplitude_mm < 0:
                raise DomainError("amplitude_mm must be >= 0")
        else:
            if self.speed_kmh <= 0:
                raise DomainError("speed_kmh must be > 0")
            if self.axle_count < 1:
                raise DomainError("axle_count must be >= 1")


PRESETS: dict[str, SignalSpec] = {
    "s1": SignalSpec(SignalKind.SINUSOID, frequency_hz=1.0, amplitude_mm=1.0),
    "s2": SignalSpec(SignalKind.SINUSOID, frequency_hz=2.0, amplitude_mm=2.0),
    "t1": SignalSpec(SignalKind.TRAIN_CROSSING, speed_kmh=24.9, axle_count=12),
    "t2": SignalSpec(SignalKind.TRAIN_CROSSING, speed_kmh=31.1, axle_count=14),
}


def _noise(n: int, rms: float, seed: int) -> np.ndarray:
    if rms <= 0:
        return np.zeros(n)
    return np.random.default_rng(seed).normal(0.0, rms, n)


def gen_sinusoid(spec: SignalSpec, seed: int = 0) -> tuple[AccelerationSeries, DisplacementSeries]:
    """Sinusoidal shake: d(t) = A sin(2 pi f t), a(t) = -A (2 pi f)^2 sin(2 pi f t).

    Returns the acceleration (m/s^2) and the exact displacement oracle (mm).
    """
    if spec.kind is not SignalKind.SINUSOID:
        raise DomainError(f"gen_sinusoid needs a sinusoid spec, got {spec.kind}")
    fs = spec.sample_rate_hz
    t = np.arange(round(spec.duration_s * fs)) / fs
    omega = 2 * math.pi * spec.frequency_hz
    amp_m = spec.amplitude_mm / 1000.0
    accel = -amp_m * omega**2 * np.sin(omega * t) + _noise(t.size, spec.noise_rms, seed)
    oracle = spec.amplitude_mm * np.sin(omega * t)
    return AccelerationSeries(accel, fs), DisplacementSeries(oracle, fs)


# Axle pulse: squared raised cosine, amp * ((1 + cos(kx)) / 2)^2. The square
# keeps the analytic second derivative continuous at the support edges, so a
# plain trapezoid double-integration oracle tracks it to well under 1% RMS.


def _axle_pulse(t: np.ndarray, center: float, width: float, amp: float) -> np.ndarray:
    x = t - center
    inside = np.abs(x) <= width / 2
    out = np.zeros_like(t)
    c = np.cos(2 * math.pi * x[inside] / width)
    out[inside] = amp / 4 * (1 + c) ** 2
    return out


def _axle_pulse_accel(t: np.ndarray, center: float, width: float, amp: float) -> np.ndarray:
    x = t - center
    inside = np.abs(x) <= width / 2
    out = np.zeros_like(t)
    k = 2 * math.pi / width
    c = np.cos(k * x[inside])
    out[inside] = -amp * k**2 / 2 * (c + 2 * c**2 - 1)
    return out


def gen_train_crossing(
    spec: SignalSpec, seed: int = 0
) -> tuple[AccelerationSeries, DisplacementSeries]:
    """Axle-passage surrogate: a sum of smooth deflection pulses.

    Pulses are spaced axle_spacing_m / speed apart in time, starting at the
    record head, so a long consist rolls across the whole window; widths are
    tied to the spacing so the displacement stays band-limited well below
    20 Hz. The acceleration is the analytic second derivative, and the
    returned displacement oracle has its best-fit line removed (the affine
    part is invisible to any reference-free reconstruction, so the
    detrended pulse train is the canonical oracle).
    """
    if spec.kind is not SignalKind.TRAIN_CROSSING:
        raise DomainError(f"gen_train_crossing needs a train spec, got {spec.kind}")
    fs = spec.sample_rate_hz
    t = np.arange(round(spec.duration_s * fs)) / fs
    speed_ms = spec.speed_kmh / 3.6
    spacing_s = spec.axle_spacing_m / speed_ms
    width = max(0.4, 0.8 * spacing_s)
    first = width / 2

    disp_mm = np.zeros_like(t)
    accel_mm = np.zeros_like(t)
    for k in range(spec.axle_count):
        c = first + k * spacing_s
        disp_mm += _axle_pulse(t, c, width, spec.axle_amplitude_mm)
        accel_mm += _axle_pulse_accel(t, c, width, spec.axle_amplitude_mm)

    # remove the best-fit line from the oracle; the acceleration is unchanged
    coeffs = np.polyfit(t, disp_mm, 1)
    disp_mm = disp_mm - np.polyval(coeffs, t)

    accel = accel_mm / 1000.0 + _noise(t.size, spec.noise_rms, seed)
    return AccelerationSeries(accel, fs), DisplacementSeries(disp_mm, fs)


def generate(spec: SignalSpec, seed: int = 0) -> tuple[AccelerationSeries, DisplacementSeries]:
    """Dispatch on spec.kind; returns (acceleration, displacement oracle)."""
    if spec.kind is SignalKind.SINUSOID:
        return gen_sinusoid(spec, seed)
    return gen_train_crossing(spec, seed)


@dataclass(frozen=True)
class LinkModel:
    """Simulated wireless link: independent drops plus pacing jitter."""

    drop_probability: float = 0.0
    jitter_stddev_s: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if not 0.0 <= self.drop_probability < 1.0:
            raise DomainError("drop_probability must be in [0, 1)")
        if self.jitter_stddev_s < 0:
            raise DomainError("jitter_stddev_s must be >= 0")


@dataclass(frozen=True)
class SensorSample:
    """One emitted sensor reading; the driven axis is x, other channels zero."""

    t: float
    ax: float
    ay: float = 0.0
    az: float = 0.0
    gx: float = 0.0
    gy: float = 0.0
    gz: float = 0.0
    sensor_id: int = 1

    def to_frame(self) -> str:
        return (
            f"{self.t:.9g},{self.ax:.9g},{self.ay:.9g},{self.az:.9g},"
            f"{self.gx:.9g},{self.gy:.9g},{self.gz:.9g},{self.sensor_id}"
        )


def simulate_sensor(
    series: AccelerationSeries,
    link: LinkModel = LinkModel(),
    sensor_id: int = 1,
    pace: float = 0.0,
):
    """Yield SensorSample records for a series over a lossy link.

    pace is a real-time scale factor: 1.0 sleeps one sample interval per
    record (jittered per the link model), 0 runs flat out. Drops and jitter
    are deterministic per link.seed. Sample timestamps stay monotone and
    unjittered; jitter only perturbs delivery pacing.
    """
    # separate streams so the drop pattern does not depend on pacing
    drop_rng = np.random.default_rng(link.seed)
    jitter_rng = np.random.default_rng(link.seed + 1)
    dt = 1.0 / series.sample_rate_hz
    for i, a in enumerate(series.samples):
        if pace > 0:
            delay = dt * pace
            if link.jitter_stddev_s > 0:
                delay += jitter_rng.normal(0.0, link.jitter_stddev_s)
            if delay > 0:
                time.sleep(delay)
        if link.drop_probability > 0 and drop_rng.random() < link.drop_probability:
            continue
        yield SensorSample(t=series.start_time + i * dt, ax=float(a), sensor_id=sensor_id)
