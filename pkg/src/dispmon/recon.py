"""Regularized FIR reconstruction of displacement from acceleration windows.

The filter maps a length-N acceleration window to a length-N displacement
window through a precomputed coefficient matrix::

    d = C @ a * dt**2          (then m -> mm)

with C = (Lbar' Lbar + lam^2 I)^-1 Lbar' Wa, where Lbar = W @ D is the
weighted second-difference operator and Wa applies the same weighting to
the interior acceleration samples. C depends only on (N, weighting, lam),
so it is built once per configuration and cached.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
import scipy.linalg
import scipy.sparse

from .errors import DataError, DomainError, GapError, NumericError, ShapeError

# Single place where the m/s^2 -> mm displacement unit factor lives.
M_TO_MM = 1000.0

MIN_WINDOW = 5


class Weighting(str, Enum):
    IDENTITY = "identity"
    HANN = "hann"


def regularization_factor(n: int) -> float:
    """Optimal ridge factor for a window of n samples: 46.81 * n**-1.95."""
    if n < MIN_WINDOW:
        raise DomainError(f"window length must be >= {MIN_WINDOW}, got {n}")
    return 46.81 * float(n) ** -1.95


@dataclass(frozen=True)
class ReconstructionConfig:
    sample_rate_hz: float = 300.0
    window_len: int = 601
    weighting: Weighting = Weighting.IDENTITY
    lambda_override: float | None = None

    def __post_init__(self):
        if self.sample_rate_hz <= 0:
            raise DomainError(f"sample_rate_hz must be > 0, got {self.sample_rate_hz}")
        if self.window_len < MIN_WINDOW:
            raise DomainError(f"window_len must be >= {MIN_WINDOW}, got {self.window_len}")
        if self.lambda_override is not None and self.lambda_override < 0:
            raise DomainError("lambda_override must be non-negative")
        object.__setattr__(self, "weighting", Weighting(self.weighting))

    @property
    def dt(self) -> float:
        return 1.0 / self.sample_rate_hz

    @property
    def lam(self) -> float:
        """Effective regularization factor (always > 0)."""
        if self.lambda_override is not None and self.lambda_override > 0:
            return self.lambda_override
        return regularization_factor(self.window_len)


def second_difference_operator(n: int, dt: float) -> np.ndarray:
    """(n-2) x n matrix whose row i holds the stencil [1, -2, 1] at columns i..i+2.

    Stored unscaled; the dt**2 factor is applied at reconstruction time.
    """
    if n < MIN_WINDOW:
        raise DomainError(f"window length must be >= {MIN_WINDOW}, got {n}")
    if dt <= 0:
        raise DomainError(f"dt must be > 0, got {dt}")
    d = np.zeros((n - 2, n))
    idx = np.arange(n - 2)
    d[idx, idx] = 1.0
    d[idx, idx + 1] = -2.0
    d[idx, idx + 2] = 1.0
    return d


def weighting_diagonal(n: int, scheme: Weighting) -> np.ndarray:
    """Weights over the n-2 interior points (identity: all ones; hann: Hann taper)."""
    if n < MIN_WINDOW:
        raise DomainError(f"window length must be >= {MIN_WINDOW}, got {n}")
    if Weighting(scheme) is Weighting.HANN:
        return np.hanning(n - 2)
    return np.ones(n - 2)


@dataclass(frozen=True)
class CoefficientMatrix:
    matrix: np.ndarray = field(compare=False)
    config: ReconstructionConfig = field(compare=True)

    @property
    def n(self) -> int:
        return self.config.window_len


def _interior_weighting(n: int, weights: np.ndarray) -> np.ndarray:
    """(n-2) x n matrix applying `weights` to the interior acceleration samples."""
    wa = np.zeros((n - 2, n))
    wa[np.arange(n - 2), np.arange(1, n - 1)] = weights
    return wa


def build_system(config: ReconstructionConfig):
    """Return (A, B) of the defining linear system A @ C = B."""
    n = config.window_len
    d = second_difference_operator(n, config.dt)
    w = weighting_diagonal(n, config.weighting)
    lbar = w[:, None] * d
    wa = _interior_weighting(n, w)
    a = lbar.T @ lbar + config.lam**2 * np.eye(n)
    b = lbar.T @ wa
    return a, b


_cache: dict[ReconstructionConfig, CoefficientMatrix] = {}
_cache_lock = threading.Lock()


def coefficient_matrix(config: ReconstructionConfig) -> CoefficientMatrix:
    """Build (or fetch the cached) N x N reconstruction operator for a config."""
    with _cache_lock:
        hit = _cache.get(config)
    if hit is not None:
        return hit

    a, b = build_system(config)
    try:
        cho = scipy.linalg.cho_factor(a)
        c = scipy.linalg.cho_solve(cho, b)
        # The ridge system is ill-conditioned for small lambda; a few rounds
        # of iterative refinement push the residual well below the contract.
        norm_b = np.linalg.norm(b)
        for _ in range(4):
            r = b - a @ c
            if np.linalg.norm(r) <= 1e-13 * norm_b:
                break
            c += scipy.linalg.cho_solve(cho, r)
    except (scipy.linalg.LinAlgError, ValueError) as exc:
        raise NumericError(
            f"failed to build coefficient matrix for {config}",
            condition=float(np.linalg.cond(a)) if np.all(np.isfinite(a)) else None,
        ) from exc

    if not np.all(np.isfinite(c)):
        raise NumericError(
            f"non-finite coefficient matrix for {config}",
            condition=float(np.linalg.cond(a)),
        )
    residual = np.linalg.norm(a @ c - b) / np.linalg.norm(b)
    if residual > 1e-10:
        raise NumericError(
            f"coefficient matrix residual {residual:.3e} exceeds 1e-10",
            condition=float(np.linalg.cond(a)),
        )

    built = CoefficientMatrix(matrix=c, config=config)
    with _cache_lock:
        _cache.setdefault(config, built)
    return built


@dataclass
class AccelerationSeries:
    """Uniformly sampled acceleration in m/s^2."""

    samples: np.ndarray
    sample_rate_hz: float
    start_time: float = 0.0

    def __post_init__(self):
        self.samples = np.asarray(self.samples, dtype=float)
        if self.samples.ndim != 1 or self.samples.size < 1:
            raise ShapeError("acceleration series must be a non-empty 1-d array")
        if self.sample_rate_hz <= 0:
            raise DomainError("sample_rate_hz must be > 0")

    @property
    def times(self) -> np.ndarray:
        return self.start_time + np.arange(self.samples.size) / self.sample_rate_hz


@dataclass
class DisplacementSeries:
    """Uniformly sampled displacement in mm."""

    samples: np.ndarray
    sample_rate_hz: float
    start_time: float = 0.0

    def __post_init__(self):
        self.samples = np.asarray(self.samples, dtype=float)

    @property
    def times(self) -> np.ndarray:
        return self.start_time + np.arange(self.samples.size) / self.sample_rate_hz


def reconstruct_batch(c: CoefficientMatrix, accel: AccelerationSeries) -> DisplacementSeries:
    """Apply the fixed operator to one full window: d = C @ a * dt^2, in mm."""
    cfg = c.config
    if accel.samples.size != cfg.window_len:
        raise ShapeError(
            f"window length mismatch: got {accel.samples.size}, operator expects {cfg.window_len}"
        )
    if abs(accel.sample_rate_hz - cfg.sample_rate_hz) > 1e-9:
        raise ShapeError(
            f"sample rate mismatch: series {accel.sample_rate_hz}, config {cfg.sample_rate_hz}"
        )
    if not np.all(np.isfinite(accel.samples)):
        raise DataError("acceleration window contains non-finite samples")
    d = c.matrix @ accel.samples * cfg.dt**2 * M_TO_MM
    return DisplacementSeries(d, accel.sample_rate_hz, accel.start_time)


def reconstruct_window(config: ReconstructionConfig, accel: AccelerationSeries) -> DisplacementSeries:
    """Solve the defining system for one window without forming C.

    Equivalent to reconstruct_batch(coefficient_matrix(cfg), accel) but uses
    the pentadiagonal structure of Lbar'Lbar + lam^2 I, so whole-record
    windows (N in the thousands) solve in O(N) instead of O(N^3).
    """
    n = config.window_len
    if accel.samples.size != n:
        raise ShapeError(
            f"window length mismatch: got {accel.samples.size}, config expects {n}"
        )
    if abs(accel.sample_rate_hz - config.sample_rate_hz) > 1e-9:
        raise ShapeError("sample rate mismatch")
    if not np.all(np.isfinite(accel.samples)):
        raise DataError("acceleration window contains non-finite samples")

    d_op = scipy.sparse.diags(
        [np.ones(n - 2), -2 * np.ones(n - 2), np.ones(n - 2)],
        offsets=[0, 1, 2],
        shape=(n - 2, n),
        format="csr",
    )
    w = weighting_diagonal(n, config.weighting)
    wsq = scipy.sparse.diags(w**2)
    a_mat = (d_op.T @ wsq @ d_op + config.lam**2 * scipy.sparse.eye(n)).tocsr()
    rhs = d_op.T @ (w**2 * accel.samples[1:-1])

    # symmetric banded form (upper), bandwidth 2
    ab = np.zeros((3, n))
    dense_diags = [a_mat.diagonal(k) for k in (2, 1, 0)]
    ab[0, 2:] = dense_diags[0]
    ab[1, 1:] = dense_diags[1]
    ab[2, :] = dense_diags[2]
    try:
        x = scipy.linalg.solveh_banded(ab, rhs)
        for _ in range(2):
            x += scipy.linalg.solveh_banded(ab, rhs - a_mat @ x)
    except (scipy.linalg.LinAlgError, ValueError) as exc:
        raise NumericError(f"banded reconstruction solve failed for N={n}") from exc
    d = x * config.dt**2 * M_TO_MM
    return DisplacementSeries(d, accel.sample_rate_hz, accel.start_time)


def max_abs_displacement(d: DisplacementSeries) -> tuple[float, int]:
    """Largest |d_i| and the first index attaining it."""
    if d.samples.size == 0:
        raise DomainError("empty displacement series")
    idx = int(np.argmax(np.abs(d.samples)))
    return float(abs(d.samples[idx])), idx


class StreamingReconstructor:
    """Sliding-window application of a fixed operator to a contiguous stream.

    Keeps a buffer of the last N acceleration samples; every hop of N//2 new
    samples applies C to the current window and emits the central N//2
    samples, so consecutive emissions tile the time axis without gaps and
    the filter's edge transients are never served.

    One instance must be driven by a single logical caller.
    """

    def __init__(self, config: ReconstructionConfig):
        self.config = config
        self.operator = coefficient_matrix(config)
        self.hop = config.window_len // 2
        self.center = (config.window_len - self.hop) // 2
        self._buf = np.empty(0)
        self._buf_start_idx = 0  # global sample index of _buf[0]
        self._next_t: float | None = None
        self._stream_t0 = 0.0

    def reset(self):
        self._buf = np.empty(0)
        self._buf_start_idx = 0
        self._next_t = None

    def push(self, accel: AccelerationSeries) -> list[DisplacementSeries]:
        """Feed a contiguous chunk; return zero or more emitted displacement chunks.

        Raises GapError (and resets, acting as the restart marker) if the
        chunk is discontinuous by more than half a sample period.
        """
        if abs(accel.sample_rate_hz - self.config.sample_rate_hz) > 1e-9:
            raise ShapeError("chunk sample rate differs from config")
        dt = self.config.dt
        if self._next_t is None:
            if self._buf.size == 0:
                self._stream_t0 = accel.start_time - self._buf_start_idx * dt
        elif abs(accel.start_time - self._next_t) > dt / 2:
            t_before, t_after = self._next_t - dt, accel.start_time
            self.reset()
            self._stream_t0 = accel.start_time
            self._next_t = accel.start_time + accel.samples.size * dt
            self._buf = np.asarray(accel.samples, dtype=float).copy()
            raise GapError(
                f"stream discontinuity: {t_before:.6f}s -> {t_after:.6f}s",
                t_before,
                t_after,
            )
        self._next_t = accel.start_time + accel.samples.size * dt
        self._buf = np.concatenate([self._buf, accel.samples])

        out = []
        n = self.config.window_len
        while self._buf.size >= n:
            window = AccelerationSeries(
                self._buf[:n],
                self.config.sample_rate_hz,
                self._stream_t0 + self._buf_start_idx * dt,
            )
            d = reconstruct_batch(self.operator, window)
            out.append(
                DisplacementSeries(
                    d.samples[self.center : self.center + self.hop],
                    d.sample_rate_hz,
                    d.start_time + self.center * dt,
                )
            )
            self._buf = self._buf[self.hop :]
            self._buf_start_idx += self.hop
        return out
