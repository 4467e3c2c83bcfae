"""Randomized property suites (the >= 1000-case contracts live here and are
re-used by the acceptance module)."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dispmon.records import SensorRecord, decode_record, encode_record
from dispmon.recon import (
    AccelerationSeries,
    ReconstructionConfig,
    coefficient_matrix,
    reconstruct_batch,
    regularization_factor,
)
from dispmon.store import Store
from dispmon.validate import rms_error

N_CASES = 1000
FS = 300.0


def relative_diff(a, b):
    scale = max(np.linalg.norm(a), np.linalg.norm(b), 1e-300)
    return np.linalg.norm(a - b) / scale


def check_linearity(n_cases=N_CASES, window=64, seed=0):
    rng = np.random.default_rng(seed)
    c = coefficient_matrix(ReconstructionConfig(window_len=window))
    for _ in range(n_cases):
        a1 = rng.normal(size=window)
        a2 = rng.normal(size=window)
        alpha, beta = rng.uniform(-10, 10, size=2)
        lhs = reconstruct_batch(c, AccelerationSeries(alpha * a1 + beta * a2, FS)).samples
        rhs = (
            alpha * reconstruct_batch(c, AccelerationSeries(a1, FS)).samples
            + beta * reconstruct_batch(c, AccelerationSeries(a2, FS)).samples
        )
        if relative_diff(lhs, rhs) > 1e-9:
            return False
    return True


def check_zero_in_zero_out(n_cases=N_CASES, seed=0):
    rng = np.random.default_rng(seed)
    for _ in range(n_cases):
        window = int(rng.integers(5, 200))
        c = coefficient_matrix(ReconstructionConfig(window_len=window))
        d = reconstruct_batch(c, AccelerationSeries(np.zeros(window), FS)).samples
        if np.any(d != 0.0):
            return False
    return True


def check_time_reversal(n_cases=N_CASES, window=64, seed=0):
    c = coefficient_matrix(ReconstructionConfig(window_len=window))
    rng = np.random.default_rng(seed)
    for _ in range(n_cases):
        a = rng.normal(size=window)
        fwd = reconstruct_batch(c, AccelerationSeries(a, FS)).samples
        rev = reconstruct_batch(c, AccelerationSeries(a[::-1].copy(), FS)).samples
        if relative_diff(rev, fwd[::-1]) > 1e-9:
            return False
    return True


def check_lambda_monotone(n_max=N_CASES + 5):
    values = [regularization_factor(n) for n in range(5, n_max)]
    return all(v > 0 for v in values) and all(a > b for a, b in zip(values, values[1:]))


def check_rms_scale_invariance(n_cases=N_CASES, seed=0):
    rng = np.random.default_rng(seed)
    for _ in range(n_cases):
        est = rng.normal(size=50)
        ref = rng.normal(size=50)
        alpha = rng.uniform(0.1, 10) * rng.choice([-1, 1])
        if abs(rms_error(alpha * est, alpha * ref) - rms_error(est, ref)) > 1e-9 * rms_error(
            est, ref
        ):
            return False
    return True


def random_record(rng, i):
    return SensorRecord(
        seq_id=0,
        t=i / FS,
        ax=float(rng.normal()),
        ay=float(rng.normal()),
        az=float(rng.normal()),
        gx=float(rng.normal()),
        gy=float(rng.normal()),
        gz=float(rng.normal()),
        sensor_id=int(rng.integers(1, 10)),
        reg_time_ms=int(rng.integers(1, 2**40)),
    )


def check_store_round_trip(tmp_path, n_cases=N_CASES, seed=0):
    rng = np.random.default_rng(seed)
    store = Store(tmp_path / "rt")
    originals = []
    for i in range(n_cases):
        r = random_record(rng, i)
        seq = store.append_live(r)
        originals.append(r.with_seq(seq))
    ok = store.fetch_live(0) == originals
    ok &= all(decode_record(encode_record(r)) == r for r in originals)
    store.close()
    return ok


def check_store_durability(tmp_path, n_cases=N_CASES, seed=0):
    rng = np.random.default_rng(seed)
    store = Store(tmp_path / "dur")
    for i in range(n_cases):
        store.append_live(random_record(rng, i))
    exp_id = store.save_experiment()
    saved = store.fetch_experiment(exp_id)
    store.close()
    reopened = Store(tmp_path / "dur")
    ok = reopened.fetch_experiment(exp_id) == saved
    ok &= reopened.list_experiments() == [exp_id]
    reopened.close()
    return ok


def check_interleaved_fetch(tmp_path, n_steps=N_CASES, seed=0):
    rng = np.random.default_rng(seed)
    store = Store(tmp_path / "il")
    reference, seen, cursor = [], [], 0
    for i in range(n_steps):
        if rng.random() < 0.6:
            r = random_record(rng, i)
            reference.append(r.with_seq(store.append_live(r)))
        else:
            got = store.fetch_live(cursor)
            seen.extend(got)
            if got:
                cursor = got[-1].seq_id
    seen.extend(store.fetch_live(cursor))
    store.close()
    return seen == reference


def test_linearity_1000_cases():
    assert check_linearity()


def test_zero_in_zero_out_1000_cases():
    assert check_zero_in_zero_out()


def test_time_reversal_1000_cases():
    assert check_time_reversal()


def test_lambda_monotone():
    assert check_lambda_monotone()


def test_rms_scale_invariance_1000_cases():
    assert check_rms_scale_invariance()


def test_store_round_trip_1000_records(tmp_path):
    assert check_store_round_trip(tmp_path)


def test_store_durability_restart(tmp_path):
    assert check_store_durability(tmp_path)


def test_interleaved_fetch_1000_steps(tmp_path):
    assert check_interleaved_fetch(tmp_path)


def test_drift_suppression():
    # constant sensor bias: the regularized filter must drift far less than a
    # naive trapezoid double-integrator on the same input
    n = 900
    t = np.arange(n) / FS
    base = -0.001 * (2 * np.pi) ** 2 * np.sin(2 * np.pi * t)
    bias = 0.05  # m/s^2
    cfg = ReconstructionConfig(window_len=n)
    c = coefficient_matrix(cfg)
    sl = slice(n // 3, 2 * n // 3)

    clean = reconstruct_batch(c, AccelerationSeries(base, FS)).samples
    biased = reconstruct_batch(c, AccelerationSeries(base + bias, FS)).samples
    filter_shift = np.max(np.abs((biased - clean)[sl]))

    def trapz_double(a):
        dt = 1 / FS
        v = np.concatenate([[0], np.cumsum((a[1:] + a[:-1]) / 2 * dt)])
        return np.concatenate([[0], np.cumsum((v[1:] + v[:-1]) / 2 * dt)]) * 1000

    naive_shift = np.max(np.abs((trapz_double(base + bias) - trapz_double(base))[sl]))
    assert filter_shift < naive_shift


@settings(max_examples=200, deadline=None)
@given(
    n1=st.integers(min_value=5, max_value=5000),
    n2=st.integers(min_value=5, max_value=5000),
)
def test_lambda_monotone_hypothesis(n1, n2):
    if n1 < n2:
        assert regularization_factor(n1) > regularization_factor(n2) > 0


@settings(max_examples=100, deadline=None)
@given(
    scale=st.floats(min_value=1e-3, max_value=1e3),
    seed=st.integers(min_value=0, max_value=2**31),
)
def test_rms_scale_invariance_hypothesis(scale, seed):
    rng = np.random.default_rng(seed)
    est, ref = rng.normal(size=40), rng.normal(size=40)
    assert rms_error(scale * est, scale * ref) == pytest.approx(rms_error(est, ref), rel=1e-9)
