import math

import numpy as np
import pytest

from cfokey import OscillatorSpec, generate_trace, pairwise_traces, reciprocal_of
from cfokey.models import CfoTrace

SPEC = OscillatorSpec(ppm_accuracy=5.0, center_freq=1.0e8, q2_sq=5.51e-18, slot_duration=0.05)
USRP_SPEC = OscillatorSpec(
    ppm_accuracy=2.5, center_freq=2.4e9, q2_sq=5.51e-18, slot_duration=0.05
)


def test_spec_rejects_nonpositive_fields():
    for field, value in [
        ("ppm_accuracy", 0.0),
        ("center_freq", -1.0),
        ("q2_sq", 0.0),
        ("slot_duration", -0.1),
    ]:
        kwargs = dict(ppm_accuracy=5.0, center_freq=1e8, q2_sq=5.51e-18, slot_duration=0.05)
        kwargs[field] = value
        with pytest.raises(ValueError):
            OscillatorSpec(**kwargs)


def test_delta_accessor():
    # f_c[MHz] * ppm: 100 MHz at 5 ppm is a 500 Hz half-range
    assert SPEC.delta_hz == pytest.approx(500.0)
    assert SPEC.delta_omega == pytest.approx(2.0 * math.pi * 500.0)


def test_m1_trace_is_constant():
    trace = generate_trace(SPEC, "M1", 5, seed=3)
    assert len(trace) == 5
    assert np.all(trace.values == trace.values[0])


def test_m1_m3_within_open_interval():
    half = SPEC.delta_omega
    for model in ("M1", "M3"):
        trace = generate_trace(SPEC, model, 10000, seed=11)
        assert np.all(np.abs(trace.values) < half)


def test_m3_sample_mean_shrinks():
    trace = generate_trace(SPEC, "M3", 10**4, seed=5)
    # uniform on (-half, half): mean of 1e4 draws within 4 sigma/sqrt(n)
    half = SPEC.delta_omega
    assert abs(np.mean(trace.values)) < 4 * half / math.sqrt(3 * 10**4)


def test_m2a_increment_variance_matches_model():
    # empirical variance of first differences over 100 traces within 5%
    expected = USRP_SPEC.walk_increment_var
    diffs = [
        np.diff(generate_trace(USRP_SPEC, "M2a", 10**4, seed=i).values) for i in range(100)
    ]
    measured = float(np.var(np.concatenate(diffs)))
    assert measured == pytest.approx(expected, rel=0.05)


def test_m2b_is_first_difference_of_companion_m2a():
    n = 512
    m2b = generate_trace(SPEC, "M2b", n, seed=9)
    companion = generate_trace(SPEC, "M2a", n + 1, seed=9)
    assert np.array_equal(m2b.values, np.diff(companion.values))


def test_m2a_variance_grows_linearly():
    # zero-start walks: var at slot 1000 should be 10x var at slot 100
    traces = np.array([
        generate_trace(USRP_SPEC, "M2a", 1001, seed=i, m2a_init="zero").values
        for i in range(600)
    ])
    ratio = np.var(traces[:, 1000]) / np.var(traces[:, 100])
    assert ratio == pytest.approx(10.0, rel=0.2)


def test_m3_lag1_autocorrelation_negligible():
    values = generate_trace(SPEC, "M3", 10**4, seed=21).values
    rho = np.corrcoef(values[:-1], values[1:])[0, 1]
    assert abs(rho) < 0.05


def test_generate_trace_deterministic():
    a = generate_trace(SPEC, "M2a", 100, seed=77)
    b = generate_trace(SPEC, "M2a", 100, seed=77)
    assert np.array_equal(a.values, b.values)


def test_generate_trace_validates_args():
    with pytest.raises(ValueError):
        generate_trace(SPEC, "M5", 10, seed=0)
    with pytest.raises(ValueError):
        generate_trace(SPEC, "M3", 0, seed=0)


def test_reciprocal_examples():
    zero = CfoTrace("M3", [0.0], 0, 0.05)
    assert reciprocal_of(zero).values[0] == 0.0
    single = CfoTrace("M3", [628.3], 0, 0.05)
    assert reciprocal_of(single).values[0] == -628.3


def test_reciprocal_is_involution():
    trace = generate_trace(SPEC, "M3", 500, seed=13)
    back = reciprocal_of(reciprocal_of(trace))
    assert np.array_equal(back.values, trace.values)


@pytest.mark.parametrize("mode", ["consistent", "pairwise_uniform"])
@pytest.mark.parametrize("model", ["M1", "M2a", "M2b", "M3"])
def test_pairwise_consistency_identity(mode, model):
    traces = pairwise_traces(SPEC, model, 200, seed=31, mode=mode)
    lhs = traces["AE"].values - traces["BE"].values
    scale = max(1.0, np.max(np.abs(traces["AB"].values)))
    assert np.max(np.abs(lhs - traces["AB"].values)) < 1e-9 * scale
    assert np.array_equal(traces["BA"].values, -traces["AB"].values)


def test_pairwise_m1_all_constant():
    traces = pairwise_traces(SPEC, "M1", 50, seed=8)
    for trace in traces.values():
        assert np.all(trace.values == trace.values[0])


def test_pairwise_m3_slots_uncorrelated():
    traces = pairwise_traces(SPEC, "M3", 10**4, seed=19)
    values = traces["AB"].values
    rho = np.corrcoef(values[:-1], values[1:])[0, 1]
    assert abs(rho) < 0.05


def test_pairwise_uniform_marginal_is_uniform():
    # pairwise_uniform mode: omega_AB matches the model's stated uniform law
    traces = pairwise_traces(SPEC, "M3", 20000, seed=23, mode="pairwise_uniform")
    values = traces["AB"].values / SPEC.delta_omega
    counts, _ = np.histogram(values, bins=10, range=(-1.0, 1.0))
    expected = values.size / 10
    assert np.all(np.abs(counts - expected) < 5 * math.sqrt(expected))
