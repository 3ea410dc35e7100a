import math

import mpmath
import numpy as np
import pytest

from cfokey import (
    OscillatorSpec,
    acf_empirical,
    acf_m2a,
    allan_deviation,
    entropy_rate_m2b,
    entropy_rate_m3,
    fit_loglog_slope,
    fractional_frequency,
    generate_trace,
    key_slot_schedule,
    kgr_bound,
    m2b_zero_crossing,
    next_key_slot,
)
from cfokey.analysis import default_taus

SPEC = OscillatorSpec(ppm_accuracy=5.0, center_freq=1e8, q2_sq=5.51e-18, slot_duration=0.05)
USRP = OscillatorSpec(ppm_accuracy=2.5, center_freq=2.4e9, q2_sq=5.51e-18, slot_duration=0.05)


def test_m3_entropy_zero_point():
    assert entropy_rate_m3(1.0 / (4.0 * math.pi)) == pytest.approx(0.0, abs=1e-12)


def test_m3_entropy_two_bits_at_one_over_pi():
    assert entropy_rate_m3(1.0 / math.pi) == pytest.approx(2.0, abs=1e-12)


def test_m3_entropy_100hz_against_high_precision():
    with mpmath.workdps(50):
        expected = float(mpmath.log(4 * mpmath.pi * 100, 2))
    assert entropy_rate_m3(100.0) == pytest.approx(expected, abs=1e-12)
    assert entropy_rate_m3(100.0) == pytest.approx(10.295, abs=1e-3)


def test_m2b_zero_crossing_value():
    # 1 / (2*pi*e*q2^2) with q2^2 = 5.51e-18 is about 1.06e16
    crossing = m2b_zero_crossing(5.51e-18)
    assert crossing == pytest.approx(1.06e16, rel=0.005)
    # entropy is exactly zero on the crossing
    omega_sq_t = crossing
    h = entropy_rate_m2b(math.sqrt(omega_sq_t / 0.05), 5.51e-18, 0.05)
    assert h == pytest.approx(0.0, abs=1e-9)


def test_m2b_entropy_against_high_precision():
    with mpmath.workdps(50):
        wc = 2 * mpmath.pi * mpmath.mpf("2.4e9")
        expected = float(
            mpmath.log(2 * mpmath.pi * mpmath.e * wc**2 * mpmath.mpf("5.51e-18") * mpmath.mpf("0.05"), 2) / 2
        )
    value = entropy_rate_m2b(2 * math.pi * 2.4e9, 5.51e-18, 0.05)
    assert value == pytest.approx(expected, abs=1e-10)


def test_entropy_rates_monotone():
    deltas = np.logspace(-1, 3, 20)
    values = [entropy_rate_m3(d) for d in deltas]
    assert all(a < b for a, b in zip(values, values[1:]))
    ts = np.logspace(-4, 0, 20)
    values = [entropy_rate_m2b(2 * math.pi * 2.4e9, 5.51e-18, t) for t in ts]
    assert all(a < b for a, b in zip(values, values[1:]))


def test_acf_m2a_values():
    assert acf_m2a(25, 100) == pytest.approx(0.5, abs=1e-15)
    assert acf_m2a(7, 7) == 1.0
    assert acf_m2a(1, 10**6) == pytest.approx(0.001, abs=1e-12)
    with pytest.raises(ValueError):
        acf_m2a(10, 5)
    with pytest.raises(ValueError):
        acf_m2a(0, 5)


def _m2a_traces(n_traces, n_slots, seed0=0):
    return [
        generate_trace(USRP, "M2a", n_slots, seed=seed0 + i, m2a_init="zero")
        for i in range(n_traces)
    ]


def test_acf_empirical_matches_closed_form():
    traces = _m2a_traces(4000, 101)
    assert acf_empirical(traces, 25, 100) == pytest.approx(0.5, abs=0.05)
    assert acf_empirical(traces, 25, 25) == pytest.approx(1.0, abs=1e-12)


def test_acf_empirical_m3_uncorrelated():
    traces = [generate_trace(SPEC, "M3", 101, seed=i) for i in range(4000)]
    assert abs(acf_empirical(traces, 25, 100)) < 0.05


def test_acf_empirical_requires_enough_traces():
    with pytest.raises(ValueError):
        acf_empirical(_m2a_traces(100, 101), 25, 100)


def test_next_key_slot_values():
    assert next_key_slot(1, 0.3) == 12
    assert next_key_slot(1, 1.0) == 1
    # definition: smallest q with sqrt(p/q) <= eta
    for p, eta in [(1, 0.3), (12, 0.3), (25, 0.5), (7, 0.9)]:
        q = next_key_slot(p, eta)
        assert math.sqrt(p / q) <= eta
        assert q == p or math.sqrt(p / (q - 1)) > eta
    with pytest.raises(ValueError):
        next_key_slot(1, 1.5)
    with pytest.raises(ValueError):
        next_key_slot(0, 0.5)


def test_key_slot_schedule_ratio_converges():
    slots = key_slot_schedule(0.3, 8)
    ratios = [b / a for a, b in zip(slots, slots[1:])]
    target = 1.0 / 0.3**2
    for ratio in ratios[2:]:
        assert ratio == pytest.approx(target, rel=0.01)


def test_kgr_bounds():
    spec = OscillatorSpec(ppm_accuracy=1.0, center_freq=1e8, q2_sq=5.51e-18, slot_duration=0.05)
    report = kgr_bound("M3", spec)  # delta = 100 Hz
    assert report.kgr_bound == pytest.approx(entropy_rate_m3(100.0) / 0.05, rel=1e-12)
    assert report.kgr_bound == pytest.approx(205.9, abs=0.1)

    # zero-entropy corner: delta = 1/(4*pi)
    tiny = OscillatorSpec(
        ppm_accuracy=1.0 / (4.0 * math.pi) * 1e-2, center_freq=1e8, q2_sq=5.51e-18,
        slot_duration=0.05,
    )
    assert kgr_bound("M3", tiny).kgr_bound == pytest.approx(0.0, abs=1e-9)

    # M2b at its zero crossing
    t = 0.05
    omega_c = math.sqrt(m2b_zero_crossing(5.51e-18) / t)
    crossing_spec = OscillatorSpec(
        ppm_accuracy=1.0, center_freq=omega_c / (2 * math.pi), q2_sq=5.51e-18, slot_duration=t
    )
    assert kgr_bound("M2b", crossing_spec).kgr_bound == pytest.approx(0.0, abs=1e-9)

    m2a = kgr_bound("M2a", spec, eta=0.3)
    assert m2a.realization_interval == pytest.approx((12 - 1) * 0.05)
    assert m2a.note  # the stand-in entropy is flagged
    with pytest.raises(ValueError):
        kgr_bound("M2a", spec, eta=1.0)
    with pytest.raises(ValueError):
        kgr_bound("M1", spec)


def test_allan_constant_trace_is_zero():
    sigmas = allan_deviation(np.full(1000, 0.5), 0.05, [0.05, 0.1, 0.4])
    assert np.allclose(sigmas, 0.0)


def test_allan_slopes_by_model():
    n = 100000
    for model, expected in (("M3", -0.5), ("M2a", +0.5)):
        trace = generate_trace(USRP, model, n, seed=42)
        y = fractional_frequency(trace, USRP)
        taus = default_taus(n, USRP.slot_duration)
        sigmas = allan_deviation(y, USRP.slot_duration, taus)
        slope = fit_loglog_slope(taus, sigmas)
        assert slope == pytest.approx(expected, abs=0.15)


def test_allan_rejects_short_trace():
    with pytest.raises(ValueError):
        allan_deviation(np.ones(10), 0.05, [0.05 * 8])
