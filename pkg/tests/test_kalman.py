import math

import numpy as np
import pytest

from cfokey import (
    CfoEstimate,
    KalmanState,
    OscillatorSpec,
    filter_trace,
    generate_trace,
    kf_init,
    kf_step,
    steady_state_covariance,
)


def _meas(value, std):
    return CfoEstimate(value=value, error_std=std, source="surrogate")


def test_init_is_definitional():
    state = kf_init(_meas(100.0, 2.0), process_var=0.5)
    assert state.estimate == 100.0
    assert state.covariance == 4.0


def test_init_zero_std_gives_zero_covariance():
    assert kf_init(_meas(1.0, 0.0), 0.5).covariance == 0.0


def test_init_deterministic():
    a = kf_init(_meas(3.0, 1.0), 0.1)
    b = kf_init(_meas(3.0, 1.0), 0.1)
    assert a == b


def test_step_perfect_measurement():
    state = kf_init(_meas(0.0, 1.0), 0.5)
    stepped = kf_step(state, _meas(7.0, 0.0))
    assert stepped.estimate == 7.0
    assert stepped.covariance == 0.0


def test_step_uninformative_measurement():
    state = kf_init(_meas(5.0, 1.0), 0.5)
    stepped = kf_step(state, _meas(1000.0, 1e12))
    assert stepped.estimate == pytest.approx(5.0, abs=1e-6)


def test_step_gain_bounds():
    state = kf_init(_meas(0.0, 1.0), 0.5)
    for std in (0.0, 0.3, 10.0, 1e6):
        nxt = kf_step(state, _meas(1.0, std))
        # gain in [0,1] means the estimate lands between prior and measurement
        assert min(0.0, 1.0) <= nxt.estimate <= max(0.0, 1.0)


def test_degenerate_filter_raises():
    state = KalmanState(estimate=0.0, covariance=0.0, process_var=0.0, meas_var=0.0)
    with pytest.raises(ValueError):
        kf_step(state, _meas(1.0, 0.0))


def test_riccati_fixed_point_against_iteration():
    q, r = 1.0, 4.0
    p = r
    for _ in range(10000):
        p_prior = p + q
        p = p_prior * r / (p_prior + r)
    analytic = steady_state_covariance(q, r)
    assert abs(p - analytic) < 1e-9
    # and the fixed point satisfies its defining equation
    assert analytic == pytest.approx((analytic + q) * r / (analytic + q + r), abs=1e-12)


def test_covariance_sequence_converges():
    state = kf_init(_meas(0.0, 3.0), process_var=0.7)
    prev = state.covariance
    for _ in range(200):
        state = kf_step(state, _meas(0.0, 3.0))
    last = state.covariance
    state = kf_step(state, _meas(0.0, 3.0))
    assert abs(state.covariance - last) < 1e-12


def test_filter_trace_single_measurement():
    out = filter_trace([_meas(42.0, 1.0)], 0.1)
    assert out.tolist() == [42.0]


def test_filter_trace_zero_noise_passthrough():
    values = [1.0, 2.0, 3.0, 4.0]
    out = filter_trace([_meas(v, 0.0) for v in values], 0.5)
    assert np.allclose(out, values)


def test_filter_trace_rejects_empty():
    with pytest.raises(ValueError):
        filter_trace([], 0.1)


def test_filtering_beats_raw_on_constant_truth():
    rng = np.random.default_rng(8)
    truth = 50.0
    raw = truth + rng.normal(0, 2.0, size=300)
    measurements = [_meas(v, 2.0) for v in raw]
    filtered = filter_trace(measurements, process_var=1e-6)
    assert np.mean((filtered[50:] - truth) ** 2) < np.mean((raw[50:] - truth) ** 2)


@pytest.mark.parametrize("r_over_q", [1.0, 10.0])
def test_filtered_mse_beats_raw_on_walks(r_over_q):
    # 500 random-walk trajectories, measurement noise >= process noise
    spec = OscillatorSpec(ppm_accuracy=5.0, center_freq=1e8, q2_sq=5.51e-18, slot_duration=0.05)
    q = spec.walk_increment_var
    r = r_over_q * q
    sigma = math.sqrt(r)
    n_slots = 200
    mse_f, mse_r, bias = [], [], []
    for i in range(500):
        trace = generate_trace(spec, "M2a", n_slots, seed=1000 + i)
        rng = np.random.default_rng(2000 + i)
        raw = trace.values + rng.normal(0, sigma, size=n_slots)
        filtered = filter_trace([_meas(v, sigma) for v in raw], q)
        mse_f.append(np.mean((filtered[50:] - trace.values[50:]) ** 2))
        mse_r.append(np.mean((raw[50:] - trace.values[50:]) ** 2))
        bias.append(np.mean(filtered[50:] - trace.values[50:]))
    mse_f, mse_r = float(np.mean(mse_f)), float(np.mean(mse_r))
    assert mse_f <= 0.9 * mse_r
    # unbiasedness: mean residual within 3 standard errors of zero
    se = np.std(bias) / math.sqrt(len(bias))
    assert abs(float(np.mean(bias))) < 3 * se


def test_vectorized_filter_matches_reference():
    from cfokey.harness import _kalman_filter_rows

    rng = np.random.default_rng(3)
    q, sigma = 0.5, 2.0
    z = rng.normal(0, 1, size=(4, 60))
    rows = _kalman_filter_rows(z, q, sigma**2)
    for i in range(4):
        ref = filter_trace([_meas(v, sigma) for v in z[i]], q)
        assert np.allclose(rows[i], ref, atol=1e-12)
