"""Sensor record type and its canonical on-disk encoding."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, replace

from .errors import DataError


@dataclass(frozen=True)
class SensorRecord:
    """One timestamped tri-axial acceleration + angular-velocity sample.

    t is seconds since experiment start; reg_time is the server receive
    timestamp in epoch milliseconds (stamped server-side, never by the sensor).
    """

    seq_id: int
    t: float
    ax: float
    ay: float
    az: float
    gx: float
    gy: float
    gz: float
    sensor_id: int
    reg_time_ms: int

    def __post_init__(self):
        if self.t < 0:
            raise DataError(f"sample time must be >= 0, got {self.t}")
        for name in ("ax", "ay", "az", "gx", "gy", "gz"):
            if not math.isfinite(getattr(self, name)):
                raise DataError(f"non-finite channel value {name}")

    def with_seq(self, seq_id: int) -> "SensorRecord":
        return replace(self, seq_id=seq_id)


def now_ms() -> int:
    return int(time.time() * 1000)


# Canonical line encoding: seq_id,t,ax,ay,az,gx,gy,gz,sensor_id,reg_time_ms
# %.17g makes the float fields round-trip bit-exactly.


def encode_record(r: SensorRecord) -> str:
    floats = ",".join(f"{v:.17g}" for v in (r.t, r.ax, r.ay, r.az, r.gx, r.gy, r.gz))
    return f"{r.seq_id},{floats},{r.sensor_id},{r.reg_time_ms}"


def decode_record(line: str) -> SensorRecord:
    parts = line.strip().split(",")
    if len(parts) != 10:
        raise DataError(f"bad record line ({len(parts)} fields)")
    return SensorRecord(
        seq_id=int(parts[0]),
        t=float(parts[1]),
        ax=float(parts[2]),
        ay=float(parts[3]),
        az=float(parts[4]),
        gx=float(parts[5]),
        gy=float(parts[6]),
        gz=float(parts[7]),
        sensor_id=int(parts[8]),
        reg_time_ms=int(parts[9]),
    )
