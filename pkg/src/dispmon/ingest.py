"""Frame parsing and the acquisition lifecycle (source -> live store).

Wire format, one frame per line::

    t,ax,ay,az,gx,gy,gz,sensor_id

Malformed frames are skipped and counted, never fatal. A single acquisition
runs at a time; start/stop are serialized by the controller.
"""

from __future__ import annotations

import math
import threading
import time
from dataclasses import dataclass, field
from enum import Enum
from urllib.parse import parse_qs, urlparse

from .errors import ConflictError, DomainError, FrameError
from .records import SensorRecord, now_ms
from .signals import PRESETS, LinkModel, generate, simulate_sensor
from .store import Store

FRAME_FIELDS = 8


def parse_frame(line: str) -> SensorRecord:
    """Parse one wire frame into an (unsequenced) record; reg_time stamped here."""
    parts = line.strip().split(",")
    if len(parts) != FRAME_FIELDS:
        raise FrameError(f"expected {FRAME_FIELDS} fields, got {len(parts)}: {line!r}")
    try:
        values = [float(p) for p in parts[:7]]
        sensor_id = int(parts[7])
    except ValueError as exc:
        raise FrameError(f"non-numeric field in frame: {line!r}") from exc
    if not all(math.isfinite(v) for v in values):
        raise FrameError(f"non-finite value in frame: {line!r}")
    t = values[0]
    if t < 0:
        raise FrameError(f"negative sample time in frame: {line!r}")
    return SensorRecord(
        seq_id=0,
        t=t,
        ax=values[1],
        ay=values[2],
        az=values[3],
        gx=values[4],
        gy=values[5],
        gz=values[6],
        sensor_id=sensor_id,
        reg_time_ms=now_ms(),
    )


class AcquisitionStatus(str, Enum):
    IDLE = "idle"
    RUNNING = "running"


@dataclass
class AcquisitionState:
    status: AcquisitionStatus = AcquisitionStatus.IDLE
    source: str | None = None
    started_at: float | None = None
    records_ingested: int = 0
    frames_rejected: int = 0


def frames_from_source(source: str, pace: float = 0.0):
    """Yield wire frames from a source descriptor.

    Descriptors:
      sim:<preset>[?seed=..&drop=..&duration=..]  synthesized sensor stream
      file:<path>[?pace=..]                       replay of a CSV frame file
    """
    parsed = urlparse(source)
    query = {k: v[-1] for k, v in parse_qs(parsed.query).items()}
    if parsed.scheme == "sim":
        preset = parsed.path
        if preset not in PRESETS:
            raise DomainError(f"unknown preset {preset!r}; choose from {sorted(PRESETS)}")
        spec = PRESETS[preset]
        if "duration" in query:
            spec = type(spec)(**{**spec.__dict__, "duration_s": float(query["duration"])})
        seed = int(query.get("seed", 0))
        link = LinkModel(
            drop_probability=float(query.get("drop", 0.0)),
            jitter_stddev_s=float(query.get("jitter", 0.0)),
            seed=seed,
        )
        accel, _ = generate(spec, seed=seed)
        for sample in simulate_sensor(accel, link, pace=pace):
            yield sample.to_frame()
    elif parsed.scheme == "file":
        prev_t = None
        with open(parsed.path, encoding="ascii") as fh:
            for line in fh:
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                if pace > 0:
                    try:
                        t = float(line.split(",", 1)[0])
                    except ValueError:
                        t = prev_t
                    if prev_t is not None and t is not None and t > prev_t:
                        time.sleep((t - prev_t) * pace)
                    prev_t = t
                yield line
        return
    else:
        raise DomainError(f"unknown source scheme in {source!r}")


class AcquisitionController:
    """Owns the single-acquisition state machine and the ingestion thread."""

    def __init__(self, store: Store):
        self.store = store
        self._lock = threading.Lock()
        self._state = AcquisitionState()
        self._stop_evt = threading.Event()
        self._thread: threading.Thread | None = None

    @property
    def state(self) -> AcquisitionState:
        with self._lock:
            return AcquisitionState(**self._state.__dict__)

    def start(self, source: str, pace: float = 0.0) -> AcquisitionState:
        with self._lock:
            if self._state.status is AcquisitionStatus.RUNNING:
                raise ConflictError("acquisition already running")
            self._state = AcquisitionState(
                status=AcquisitionStatus.RUNNING,
                source=source,
                started_at=time.time(),
            )
            self._stop_evt.clear()
            self._thread = threading.Thread(
                target=self._run, args=(source, pace), daemon=True
            )
            self._thread.start()
            return AcquisitionState(**self._state.__dict__)

    def _run(self, source: str, pace: float):
        try:
            for frame in frames_from_source(source, pace=pace):
                if self._stop_evt.is_set():
                    break
                try:
                    record = parse_frame(frame)
                except FrameError:
                    with self._lock:
                        self._state.frames_rejected += 1
                    continue
                self.store.append_live(record)
                with self._lock:
                    self._state.records_ingested += 1
        finally:
            with self._lock:
                self._state.status = AcquisitionStatus.IDLE

    def stop(self) -> AcquisitionState:
        with self._lock:
            thread = self._thread
        self._stop_evt.set()
        if thread is not None:
            thread.join(timeout=10.0)
        with self._lock:
            self._state.status = AcquisitionStatus.IDLE
            self._thread = None
            return AcquisitionState(**self._state.__dict__)

    def wait(self, timeout: float | None = None):
        """Block until the ingestion thread drains its source (tests/replay)."""
        thread = self._thread
        if thread is not None:
            thread.join(timeout=timeout)
