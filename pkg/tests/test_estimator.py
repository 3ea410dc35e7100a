import math

import numpy as np
import pytest

from cfokey import (
    BpskConfig,
    ChannelParams,
    EstimatorConfig,
    LowConfidenceError,
    apply_cfo,
    awgn_channel,
    calibrate_error_std,
    estimate_cfo_blind,
    surrogate_estimate,
    synth_bpsk,
)

# precision setup: 10 kHz symbols at 16 sps, 256-symbol frames, 2^16 FFT
WF = BpskConfig(symbol_rate=10000.0, samples_per_symbol=16, n_symbols=256)
EST = EstimatorConfig(
    lpf_cutoff=2500.0, symbol_rate=10000.0, max_cfo_hz=600.0, lpf_taps=129, fft_size=65536
)


def _noiseless_frame(df_hz, phase=0.0, seed=1, amplitude=1.0):
    cfg = BpskConfig(
        symbol_rate=WF.symbol_rate,
        samples_per_symbol=WF.samples_per_symbol,
        n_symbols=WF.n_symbols,
        amplitude=amplitude,
    )
    return apply_cfo(synth_bpsk(cfg, seed=seed), 2.0 * math.pi * df_hz, phase)


@pytest.mark.parametrize("df", [-500.0, 0.0, 500.0])
def test_noiseless_recovery_within_2hz(df):
    est = estimate_cfo_blind(_noiseless_frame(df), EST)
    assert est.value / (2.0 * math.pi) == pytest.approx(df, abs=2.0)


def test_sign_is_recovered():
    est = estimate_cfo_blind(_noiseless_frame(-500.0), EST)
    assert est.value < 0


def test_factor_of_two_guard():
    # the squared tone sits at 2*df; the estimate must be df, not 2*df
    est = estimate_cfo_blind(_noiseless_frame(250.0), EST)
    df_hat = est.value / (2.0 * math.pi)
    assert abs(df_hat - 250.0) < 2.0
    assert abs(df_hat - 500.0) > 200.0


def test_phase_invariance():
    a = estimate_cfo_blind(_noiseless_frame(313.0, phase=0.0), EST)
    b = estimate_cfo_blind(_noiseless_frame(313.0, phase=math.pi / 3.0), EST)
    assert abs(a.value - b.value) <= 1e-6 * abs(a.value)


def test_amplitude_invariance():
    a = estimate_cfo_blind(_noiseless_frame(313.0, amplitude=1.0), EST)
    b = estimate_cfo_blind(_noiseless_frame(313.0, amplitude=7.5), EST)
    assert a.value == pytest.approx(b.value, abs=1e-9)


def test_mean_bias_below_half_bin():
    rng = np.random.default_rng(99)
    errors = []
    for _ in range(1000):
        df = rng.uniform(-500.0, 500.0)
        est = estimate_cfo_blind(_noiseless_frame(df, seed=int(rng.integers(1 << 31))), EST)
        errors.append(est.value / (2.0 * math.pi) - df)
    # interpolated bin: fs / fft_size / 2 in the estimate domain
    half_bin = WF.sample_rate / EST.fft_size / 2.0 / 2.0
    assert abs(float(np.mean(errors))) < half_bin


def test_low_confidence_on_pure_noise():
    # short-frame geometry: few independent spectral cells in band, so a
    # noise peak cannot clear the 6 dB margin over the band median
    wf = BpskConfig(symbol_rate=10000.0, samples_per_symbol=4, n_symbols=32)
    est = EstimatorConfig(
        lpf_cutoff=2500.0, symbol_rate=10000.0, max_cfo_hz=500.0, lpf_taps=63, fft_size=4096
    )
    noise = awgn_channel(
        apply_cfo(synth_bpsk(wf, seed=2), 0.0),
        ChannelParams(snr_db=-25.0, noise_seed=2),
    )
    with pytest.raises(LowConfidenceError) as excinfo:
        estimate_cfo_blind(noise, est)
    # the raw estimate still rides along; the peak stays inside the band
    assert abs(excinfo.value.estimate.value) <= 2.0 * math.pi * 2.0 * est.max_cfo_hz / 2.0 * 1.01
    assert excinfo.value.ratio_db < 6.0


def test_blind_validates_inputs():
    short = _noiseless_frame(0.0)
    from cfokey.waveform import ComplexSignal

    tiny = ComplexSignal(short.sample_rate, short.samples[:64])
    with pytest.raises(ValueError):
        estimate_cfo_blind(tiny, EST)
    with pytest.raises(ValueError):
        EstimatorConfig(lpf_cutoff=900.0, symbol_rate=10000.0, max_cfo_hz=600.0)
    with pytest.raises(ValueError):
        EstimatorConfig(lpf_cutoff=2500.0, symbol_rate=10000.0, max_cfo_hz=600.0, fft_size=1000)


def test_surrogate_zero_std_is_exact():
    est = surrogate_estimate(123.4, 0.0, seed=5)
    assert est.value == 123.4
    assert est.source == "surrogate"


def test_surrogate_sample_std():
    draws = np.array([surrogate_estimate(0.0, 1.0, seed=s).value for s in range(100000)])
    assert float(np.std(draws)) == pytest.approx(1.0, rel=0.01)


def test_surrogate_deterministic():
    assert surrogate_estimate(5.0, 2.0, seed=11).value == surrogate_estimate(5.0, 2.0, seed=11).value


@pytest.fixture(scope="module")
def small_calibration():
    wf = BpskConfig(symbol_rate=10000.0, samples_per_symbol=4, n_symbols=32)
    est = EstimatorConfig(
        lpf_cutoff=2500.0, symbol_rate=10000.0, max_cfo_hz=500.0, lpf_taps=63, fft_size=4096
    )
    return calibrate_error_std([0.0, 10.0, 20.0], wf, est, trials=150, seed=6), wf, est


def test_calibration_monotone_in_snr(small_calibration):
    table, _, _ = small_calibration
    assert table.error_std[0] >= table.error_std[1] >= table.error_std[2]


def test_calibration_noise_free_floor():
    est = EstimatorConfig(
        lpf_cutoff=2500.0, symbol_rate=10000.0, max_cfo_hz=500.0, lpf_taps=63, fft_size=4096
    )
    wf = BpskConfig(symbol_rate=10000.0, samples_per_symbol=4, n_symbols=32)
    table = calibrate_error_std([math.inf], wf, est, trials=100, seed=2)
    # interpolated-bin tolerance at this zero-padding ratio
    bin_rad = 2.0 * math.pi * wf.sample_rate / est.fft_size / 2.0
    assert table.error_std[0] <= bin_rad


def test_calibration_improves_with_frame_length(small_calibration):
    table, wf, est = small_calibration
    longer = BpskConfig(
        symbol_rate=wf.symbol_rate,
        samples_per_symbol=wf.samples_per_symbol,
        n_symbols=wf.n_symbols * 2,
    )
    table2 = calibrate_error_std([10.0], longer, est, trials=150, seed=6)
    assert table2.error_std[0] < table.error_std[1]


def test_calibration_requires_trials():
    wf = BpskConfig(symbol_rate=10000.0, samples_per_symbol=4, n_symbols=32)
    est = EstimatorConfig(
        lpf_cutoff=2500.0, symbol_rate=10000.0, max_cfo_hz=500.0, lpf_taps=63, fft_size=4096
    )
    with pytest.raises(ValueError):
        calibrate_error_std([10.0], wf, est, trials=50)


def test_calibration_lookup_and_outage(calibration):
    # inside the valid range: interpolation between grid points
    mid = calibration.lookup(7.0)
    assert calibration.lookup(8.0) <= mid <= calibration.lookup(6.0)
    # above the table: clamp to the best point
    assert calibration.lookup(40.0) == calibration.lookup(20.0)
    # far below the table: outage
    assert math.isinf(calibration.lookup(-30.0))


def test_calibration_csv_roundtrip(tmp_path, calibration):
    path = tmp_path / "calibration.csv"
    calibration.to_csv(path)
    from cfokey import CalibrationTable

    back = CalibrationTable.from_csv(path, calibration.max_cfo_hz)
    assert np.allclose(back.snr_db, calibration.snr_db)
    assert np.allclose(back.error_std, calibration.error_std, rtol=1e-4)
    assert np.array_equal(back.valid, calibration.valid)
