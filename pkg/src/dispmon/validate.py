"""End-to-end validation: RMS errors in time and frequency domain.

Runs a test excitation through either the bare reconstruction (direct mode)
or the whole simulator -> ingest -> store -> streaming-view pipeline, and
reports errors against the signal's analytic displacement oracle:

    E = RMS(est - ref) / RMS(ref) * 100

The frequency-domain error applies the same formula to Welch PSD values
restricted to the 0-20 Hz band that dominates these signals.
"""

from __future__ import annotations

import tempfile
import time
from dataclasses import dataclass

import numpy as np
import scipy.signal

from .errors import DomainError, ShapeError
from .ingest import AcquisitionController
from .recon import (
    AccelerationSeries,
    DisplacementSeries,
    ReconstructionConfig,
    StreamingReconstructor,
    max_abs_displacement,
    reconstruct_window,
)
from .signals import PRESETS, generate
from .store import Store

DEFAULT_SEGMENT_LEN = 2048
DEFAULT_OVERLAP = 0.5
DEFAULT_BAND_HZ = (0.0, 20.0)

# streaming window used by pipeline mode: 3 s at 300 Hz, covers three
# periods of the slowest (1 Hz) test signal
PIPELINE_WINDOW = 900


def _rms(x: np.ndarray) -> float:
    return float(np.sqrt(np.mean(np.square(x))))


def rms_error(est, ref) -> float:
    """Relative RMS error in percent: RMS(est-ref)/RMS(ref)*100."""
    est = np.asarray(getattr(est, "samples", est), dtype=float)
    ref = np.asarray(getattr(ref, "samples", ref), dtype=float)
    if est.shape != ref.shape:
        raise ShapeError(f"length mismatch: {est.shape} vs {ref.shape}")
    if est.size < 2:
        raise DomainError("need at least 2 samples")
    denom = _rms(ref)
    if denom == 0.0:
        raise DomainError("zero reference signal")
    return _rms(est - ref) / denom * 100.0


@dataclass
class PsdEstimate:
    frequencies_hz: np.ndarray
    power: np.ndarray
    segment_len: int
    overlap_fraction: float
    window: str = "hann"


def welch_psd(
    series,
    sample_rate_hz: float | None = None,
    segment_len: int = DEFAULT_SEGMENT_LEN,
    overlap_fraction: float = DEFAULT_OVERLAP,
) -> PsdEstimate:
    """One-sided Hann-windowed Welch PSD (density scaling).

    The integral of power over frequency recovers the signal's mean square
    up to windowing tolerance.
    """
    x = np.asarray(getattr(series, "samples", series), dtype=float)
    fs = sample_rate_hz if sample_rate_hz is not None else series.sample_rate_hz
    if not 0 <= overlap_fraction < 1:
        raise DomainError("overlap_fraction must be in [0, 1)")
    if x.size < segment_len:
        raise DomainError(f"series length {x.size} < segment length {segment_len}")
    freqs, power = scipy.signal.welch(
        x,
        fs=fs,
        window="hann",
        nperseg=segment_len,
        noverlap=int(overlap_fraction * segment_len),
        detrend=False,
        return_onesided=True,
        scaling="density",
    )
    return PsdEstimate(freqs, power, segment_len, overlap_fraction)


def psd_band_error(
    est_psd: PsdEstimate, ref_psd: PsdEstimate, band: tuple[float, float] = DEFAULT_BAND_HZ
) -> float:
    """rms_error applied to PSD values restricted to a frequency band."""
    if est_psd.frequencies_hz.shape != ref_psd.frequencies_hz.shape or not np.allclose(
        est_psd.frequencies_hz, ref_psd.frequencies_hz
    ):
        raise ShapeError("PSD frequency grids differ")
    mask = (est_psd.frequencies_hz >= band[0]) & (est_psd.frequencies_hz <= band[1])
    return rms_error(est_psd.power[mask], ref_psd.power[mask])


@dataclass
class ErrorReport:
    case: str
    mode: str
    e_time_pct: float
    e_freq_pct: float
    max_est_mm: float
    max_ref_mm: float
    runtime_s: float

    CSV_HEADER = "case,E_time_pct,E_freq_pct,max_est_mm,max_ref_mm,runtime_s"

    def to_csv_row(self) -> str:
        return (
            f"{self.case},{self.e_time_pct:.4f},{self.e_freq_pct:.4f},"
            f"{self.max_est_mm:.4f},{self.max_ref_mm:.4f},{self.runtime_s:.3f}"
        )


def _compare(
    est: np.ndarray, ref: np.ndarray, fs: float, trim: int, segment_len: int
) -> tuple[float, float]:
    """Time error over the trimmed region plus the 0-20 Hz PSD error."""
    est_c, ref_c = est[trim : est.size - trim], ref[trim : ref.size - trim]
    e_time = rms_error(est_c, ref_c)
    seg = min(segment_len, est_c.size)
    e_freq = psd_band_error(
        welch_psd(est_c, fs, seg), welch_psd(ref_c, fs, seg)
    )
    return e_time, e_freq


def run_direct(case: str, seed: int = 0) -> ErrorReport:
    """generate -> whole-record batch reconstruction -> compare to oracle.

    The comparison excludes the outer sixth at each end, where the
    regularized filter's boundary transient lives.
    """
    t0 = time.perf_counter()
    accel, oracle = generate(PRESETS[case], seed=seed)
    n = accel.samples.size
    cfg = ReconstructionConfig(sample_rate_hz=accel.sample_rate_hz, window_len=n)
    est = reconstruct_window(cfg, accel)
    trim = n // 6
    e_time, e_freq = _compare(
        est.samples, oracle.samples, accel.sample_rate_hz, trim, DEFAULT_SEGMENT_LEN
    )
    return ErrorReport(
        case=case,
        mode="direct",
        e_time_pct=e_time,
        e_freq_pct=e_freq,
        max_est_mm=max_abs_displacement(est)[0],
        max_ref_mm=max_abs_displacement(oracle)[0],
        runtime_s=time.perf_counter() - t0,
    )


def run_pipeline(case: str, seed: int = 0, window_len: int = PIPELINE_WINDOW) -> ErrorReport:
    """generate -> simulated sensor -> ingest -> store -> streaming reconstruction.

    Uses the undecimated streaming tap; the comparison covers the emitted
    region (which already excludes the filter edges by construction).
    """
    t0 = time.perf_counter()
    spec = PRESETS[case]
    accel, oracle = generate(spec, seed=seed)
    fs = accel.sample_rate_hz

    with tempfile.TemporaryDirectory() as tmp:
        store = Store(tmp)
        ctl = AcquisitionController(store)
        ctl.start(f"sim:{case}?seed={seed}", pace=0.0)
        ctl.wait()
        ctl.stop()
        records = store.fetch_live(0)
        store.close()

    streamer = StreamingReconstructor(
        ReconstructionConfig(sample_rate_hz=fs, window_len=window_len)
    )
    emitted: list[DisplacementSeries] = []
    chunk = 150  # ~0.5 s of samples per push, mirroring the poll cadence
    xs = np.array([r.ax for r in records])
    ts = np.array([r.t for r in records])
    for i in range(0, xs.size, chunk):
        emitted.extend(
            streamer.push(AccelerationSeries(xs[i : i + chunk], fs, start_time=ts[i]))
        )

    est = np.concatenate([e.samples for e in emitted])
    start_idx = int(round(emitted[0].start_time * fs))
    ref = oracle.samples[start_idx : start_idx + est.size]
    e_time, e_freq = _compare(est, ref, fs, 0, DEFAULT_SEGMENT_LEN)
    est_series = DisplacementSeries(est, fs, emitted[0].start_time)
    return ErrorReport(
        case=case,
        mode="pipeline",
        e_time_pct=e_time,
        e_freq_pct=e_freq,
        max_est_mm=max_abs_displacement(est_series)[0],
        max_ref_mm=max_abs_displacement(oracle)[0],
        runtime_s=time.perf_counter() - t0,
    )


def run_validation(case: str, mode: str = "direct", seed: int = 0) -> ErrorReport:
    if case not in PRESETS:
        raise DomainError(f"unknown case {case!r}; choose from {sorted(PRESETS)}")
    if mode == "direct":
        return run_direct(case, seed=seed)
    if mode == "pipeline":
        return run_pipeline(case, seed=seed)
    raise DomainError(f"unknown mode {mode!r}; expected 'direct' or 'pipeline'")


def format_table(reports: list[ErrorReport]) -> str:
    """Two-column summary tables (time / frequency domain errors)."""
    lines = ["RMS error for displacements in time domain", "case\tE_time (%)"]
    for r in reports:
        lines.append(f"{r.case.upper()}\t{r.e_time_pct:.2f}")
    lines += ["", "RMS error for displacements in frequency domain", "case\tE_freq (%)"]
    for r in reports:
        lines.append(f"{r.case.upper()}\t{r.e_freq_pct:.2f}")
    return "\n".join(lines)
