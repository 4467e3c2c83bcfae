"""Server-side displacement views: streaming reconstruction, decimation,
max/severity readout.

All displacement math happens here, server-side; clients only render what
they are served. The live view keeps a rolling window of reconstructed
samples (trailing max_points * stride, i.e. ~20 s at the defaults),
decimates by plain stride so every served point is a real reconstructed
sample, and computes the max before decimation so no peak is lost.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import DomainError, GapError
from .recon import (
    AccelerationSeries,
    DisplacementSeries,
    ReconstructionConfig,
    StreamingReconstructor,
    max_abs_displacement,
    reconstruct_window,
)
from .records import SensorRecord
from .store import Store


class SeverityClass(str, Enum):
    GREEN = "green"
    ORANGE = "orange"
    RED = "red"


GREEN_MAX_MM = 6.00
ORANGE_MAX_MM = 10.00


def classify_severity(max_mm: float) -> SeverityClass:
    """green iff max <= 6.00 mm; orange iff 6.00 < max <= 10.00; red above."""
    if max_mm < 0:
        raise DomainError(f"max displacement must be >= 0, got {max_mm}")
    if max_mm <= GREEN_MAX_MM:
        return SeverityClass.GREEN
    if max_mm <= ORANGE_MAX_MM:
        return SeverityClass.ORANGE
    return SeverityClass.RED


@dataclass(frozen=True)
class ServiceConfig:
    poll_interval_s: float = 0.5
    display_rate_hz: float = 5.0
    max_points: int = 100
    reconstruction: ReconstructionConfig = field(default_factory=ReconstructionConfig)
    bind: str = "127.0.0.1:8000"
    source: str = "sim:s1"

    def __post_init__(self):
        if self.poll_interval_s <= 0:
            raise DomainError("poll_interval_s must be > 0")
        if self.display_rate_hz > self.reconstruction.sample_rate_hz:
            raise DomainError("display_rate_hz cannot exceed the sample rate")

    @property
    def stride(self) -> int:
        return max(1, round(self.reconstruction.sample_rate_hz / self.display_rate_hz))


@dataclass
class DisplacementView:
    points: list[tuple[float, float]]  # (t seconds, d mm)
    max_displacement_mm: float
    max_time_s: float
    severity: SeverityClass
    as_of_seq: int
    restarted: bool = False

    def to_json(self) -> dict:
        return {
            "points": [{"t": t, "d": d} for t, d in self.points],
            "max_displacement_mm": self.max_displacement_mm,
            "max_time_s": self.max_time_s,
            "severity": self.severity.value,
            "as_of_seq": self.as_of_seq,
            "restarted": self.restarted,
        }


def records_to_chunks(records: list[SensorRecord], fs: float) -> list[AccelerationSeries]:
    """Group records into contiguous series, splitting where t jumps by more
    than half a sample period."""
    if not records:
        return []
    dt = 1.0 / fs
    chunks = []
    start = 0
    for i in range(1, len(records)):
        if abs(records[i].t - records[i - 1].t - dt) > dt / 2:
            chunks.append((start, i))
            start = i
    chunks.append((start, len(records)))
    return [
        AccelerationSeries(
            np.array([r.ax for r in records[a:b]]), fs, start_time=records[a].t
        )
        for a, b in chunks
    ]


class LiveViewEngine:
    """Per-session streaming reconstruction cursor over the live table."""

    def __init__(self, store: Store, config: ServiceConfig):
        self.store = store
        self.config = config
        self._lock = threading.Lock()
        self._streamer = StreamingReconstructor(config.reconstruction)
        self._cursor = 0
        self._restarted = False
        # rolling undecimated window; _base is the global sample index of _disp[0]
        self._disp = np.empty(0)
        self._base = 0
        self._t0 = 0.0

    def reset(self):
        with self._lock:
            self._streamer.reset()
            self._cursor = 0
            self._restarted = False
            self._disp = np.empty(0)
            self._base = 0

    def _ingest_new(self):
        fs = self.config.reconstruction.sample_rate_hz
        records = self.store.fetch_live(self._cursor)
        if not records:
            return
        self._cursor = records[-1].seq_id
        for chunk in records_to_chunks(records, fs):
            try:
                emitted = self._streamer.push(chunk)
            except GapError:
                self._restarted = True
                self._disp = np.empty(0)
                self._base = 0
                continue
            for e in emitted:
                idx = int(round(e.start_time * fs))
                if self._disp.size == 0:
                    self._base = idx
                    self._t0 = e.start_time - 0.0
                self._disp = np.concatenate([self._disp, e.samples])
        keep = self.config.max_points * self.config.stride
        if self._disp.size > keep:
            drop = self._disp.size - keep
            self._disp = self._disp[drop:]
            self._base += drop

    def view(self, as_of_seq: int = 0) -> DisplacementView:
        with self._lock:
            self._ingest_new()
            fs = self.config.reconstruction.sample_rate_hz
            stride = self.config.stride
            restarted, self._restarted = self._restarted, False
            if self._disp.size == 0:
                return DisplacementView(
                    points=[],
                    max_displacement_mm=0.0,
                    max_time_s=0.0,
                    severity=SeverityClass.GREEN,
                    as_of_seq=self._cursor,
                    restarted=restarted,
                )
            # decimate on the absolute sample grid so points never shift
            first = -self._base % stride
            idx = np.arange(first, self._disp.size, stride)
            points = [
                (float((self._base + i) / fs), float(self._disp[i])) for i in idx
            ]
            points = points[-self.config.max_points :]
            series = DisplacementSeries(self._disp, fs, self._base / fs)
            max_mm, max_i = max_abs_displacement(series)
            return DisplacementView(
                points=points,
                max_displacement_mm=max_mm,
                max_time_s=float((self._base + max_i) / fs),
                severity=classify_severity(max_mm),
                as_of_seq=self._cursor,
                restarted=restarted,
            )


def experiment_view(store: Store, exp_id: str, config: ServiceConfig) -> DisplacementView:
    """Whole-record batch reconstruction of an archived experiment,
    decimated to at most max_points for display."""
    records = store.fetch_experiment(exp_id)  # raises NotFoundError
    fs = config.reconstruction.sample_rate_hz
    n = len(records)
    if n < 5:
        raise DomainError(f"experiment {exp_id} too short to reconstruct ({n} records)")
    accel = AccelerationSeries(np.array([r.ax for r in records]), fs, records[0].t)
    cfg = ReconstructionConfig(
        sample_rate_hz=fs,
        window_len=n,
        weighting=config.reconstruction.weighting,
    )
    d = reconstruct_window(cfg, accel)
    max_mm, max_i = max_abs_displacement(d)
    stride = max(1, -(-n // config.max_points))  # ceil division
    times = d.times
    points = [(float(times[i]), float(d.samples[i])) for i in range(0, n, stride)]
    return DisplacementView(
        points=points[: config.max_points],
        max_displacement_mm=max_mm,
        max_time_s=float(times[max_i]),
        severity=classify_severity(max_mm),
        as_of_seq=0,
    )
