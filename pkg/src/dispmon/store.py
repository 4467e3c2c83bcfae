"""Two-table persistence: a live acquisition buffer and an experiment archive.

The live table is an append-only list of sensor records, cleared only by
clear_live. The archive maps save-time ids to immutable record lists. Both
are file-backed under one directory:

    <root>/live.log               canonical record lines, one per append
    <root>/experiments/<id>.log   header line '# exp_time=<iso8601>' + records

Single writer (the ingestion task) with concurrent readers; every public
method is linearizable under one internal lock.
"""

from __future__ import annotations

import datetime as _dt
import os
import threading
from pathlib import Path

from .errors import DomainError, NotFoundError, PersistenceError
from .records import SensorRecord, decode_record, encode_record

_EXP_HEADER = "# exp_time="


def _exp_time_iso(ts: _dt.datetime) -> str:
    return ts.replace(microsecond=0).isoformat()


class Store:
    def __init__(self, root: str | Path):
        self.root = Path(root)
        self.exp_dir = self.root / "experiments"
        try:
            self.exp_dir.mkdir(parents=True, exist_ok=True)
        except OSError as exc:
            raise PersistenceError(f"cannot create store directory {self.root}") from exc
        self._lock = threading.RLock()
        self._live: list[SensorRecord] = []
        self._live_path = self.root / "live.log"
        self._load_live()
        self._live_fh = open(self._live_path, "a", encoding="ascii")

    def _load_live(self):
        if not self._live_path.exists():
            return
        with open(self._live_path, encoding="ascii") as fh:
            for line in fh:
                if line.strip():
                    self._live.append(decode_record(line))

    def close(self):
        with self._lock:
            self._live_fh.close()

    # -- live table -----------------------------------------------------

    def append_live(self, record: SensorRecord) -> int:
        with self._lock:
            seq = self._live[-1].seq_id + 1 if self._live else 1
            stamped = record.with_seq(seq)
            try:
                self._live_fh.write(encode_record(stamped) + "\n")
                self._live_fh.flush()
            except OSError as exc:
                raise PersistenceError("live append failed") from exc
            self._live.append(stamped)
            return seq

    def fetch_live(self, since_seq: int = 0) -> list[SensorRecord]:
        if since_seq < 0:
            raise DomainError("since_seq must be >= 0")
        with self._lock:
            # seq ids are contiguous from 1 between clears
            base = self._live[0].seq_id - 1 if self._live else 0
            start = max(0, since_seq - base)
            return self._live[start:]

    def live_count(self) -> int:
        with self._lock:
            return len(self._live)

    def clear_live(self) -> int:
        with self._lock:
            n = len(self._live)
            self._live.clear()
            try:
                self._live_fh.close()
                self._live_fh = open(self._live_path, "w", encoding="ascii")
            except OSError as exc:
                raise PersistenceError("live clear failed") from exc
            return n

    # -- experiment archive ---------------------------------------------

    def _exp_path(self, exp_id: str) -> Path:
        return self.exp_dir / f"{exp_id}.log"

    def save_experiment(self, now: _dt.datetime | None = None) -> str:
        with self._lock:
            if not self._live:
                raise DomainError("cannot save an empty live table")
            ts = now or _dt.datetime.now()
            base = ts.strftime("%Y%m%dT%H%M%S")
            suffix = 1
            while self._exp_path(f"{base}-{suffix}").exists():
                suffix += 1
            exp_id = f"{base}-{suffix}"
            path = self._exp_path(exp_id)
            try:
                with open(path, "w", encoding="ascii") as fh:
                    fh.write(f"{_EXP_HEADER}{_exp_time_iso(ts)}\n")
                    for r in self._live:
                        fh.write(encode_record(r) + "\n")
                    fh.flush()
                    os.fsync(fh.fileno())
            except OSError as exc:
                raise PersistenceError(f"experiment save failed: {path}") from exc
            return exp_id

    def list_experiments(self) -> list[str]:
        with self._lock:
            ids = [p.stem for p in self.exp_dir.glob("*.log")]
            # id format <YYYYmmddTHHMMSS>-<n>: lexicographic order on the stamp,
            # numeric on the suffix
            return sorted(ids, key=lambda i: (i.rsplit("-", 1)[0], int(i.rsplit("-", 1)[1])))

    def experiment_time(self, exp_id: str) -> str:
        path = self._exp_path(exp_id)
        if not path.exists():
            raise NotFoundError(exp_id)
        with open(path, encoding="ascii") as fh:
            header = fh.readline().strip()
        return header[len(_EXP_HEADER):]

    def fetch_experiment(self, exp_id: str) -> list[SensorRecord]:
        with self._lock:
            path = self._exp_path(exp_id)
            if not path.exists():
                raise NotFoundError(exp_id)
            records = []
            with open(path, encoding="ascii") as fh:
                for line in fh:
                    line = line.strip()
                    if not line or line.startswith("#"):
                        continue
                    records.append(decode_record(line))
            return records

    def clear_experiments(self) -> int:
        with self._lock:
            paths = list(self.exp_dir.glob("*.log"))
            for p in paths:
                try:
                    p.unlink()
                except OSError as exc:
                    raise PersistenceError(f"failed to remove {p}") from exc
            return len(paths)

    # -- export / import -------------------------------------------------

    def export_experiment(self, exp_id: str, path: str | Path):
        """Write an archived experiment as ingest-format CSV frames."""
        records = self.fetch_experiment(exp_id)
        exp_time = self.experiment_time(exp_id)
        with open(path, "w", encoding="ascii") as fh:
            fh.write(f"{_EXP_HEADER}{exp_time}\n")
            for r in records:
                fh.write(
                    f"{r.t:.17g},{r.ax:.17g},{r.ay:.17g},{r.az:.17g},"
                    f"{r.gx:.17g},{r.gy:.17g},{r.gz:.17g},{r.sensor_id}\n"
                )
