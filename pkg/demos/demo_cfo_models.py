"""
CFO models and their stability regimes
======================================

Walks through the four stochastic models of the carrier frequency offset
between two radios and checks the properties each one is chosen for:
reciprocity, the random-walk memory of M2a, and the Allan-deviation slopes
that separate the white-FM and random-walk-FM regimes.
"""

import numpy as np

from cfokey import (
    OscillatorSpec,
    allan_deviation,
    fit_loglog_slope,
    fractional_frequency,
    generate_trace,
    pairwise_traces,
    reciprocal_of,
)
from cfokey.analysis import default_taus

# a 2.4 GHz radio with a 2.5 ppm oscillator: CFO half-range of 6 kHz
spec = OscillatorSpec(ppm_accuracy=2.5, center_freq=2.4e9, q2_sq=5.51e-18, slot_duration=0.05)
print(f"CFO half-range: {spec.delta_hz:.0f} Hz, walk step std: "
      f"{np.sqrt(spec.walk_increment_var):.2f} rad/s per slot")

# M1 never moves; M3 redraws every slot; M2a random-walks.
for model in ("M1", "M2a", "M3"):
    trace = generate_trace(spec, model, 6, seed=1)
    values_hz = trace.values / (2 * np.pi)
    print(f"{model:>3}: " + "  ".join(f"{v:+9.1f}" for v in values_hz) + "  (Hz)")

# Reciprocity is exact at the model layer: what Bob sees is minus what
# Alice sees, slot by slot.
ab = generate_trace(spec, "M3", 1000, seed=2)
ba = reciprocal_of(ab)
print(f"\nmax |omega_AB + omega_BA| = {np.max(np.abs(ab.values + ba.values)):.3e} rad/s")

# The four CFOs of the Alice/Bob/Eve triangle stay mutually consistent:
# Eve's two links differ by exactly the legitimate pair's CFO.
traces = pairwise_traces(spec, "M3", 1000, seed=3)
residual = traces["AE"].values - traces["BE"].values - traces["AB"].values
print(f"max |omega_AE - omega_BE - omega_AB| = {np.max(np.abs(residual)):.3e} rad/s")

# Allan deviation separates the regimes: white FM (M3) slopes down at
# -1/2, random-walk FM (M2a) climbs at +1/2.
n = 100000
print("\nAllan deviation slopes over 1e5 slots:")
for model in ("M3", "M2a"):
    trace = generate_trace(spec, model, n, seed=4)
    y = fractional_frequency(trace, spec)
    taus = default_taus(n, spec.slot_duration)
    sigma = allan_deviation(y, spec.slot_duration, taus)
    print(f"  {model:>3}: fitted log-log slope {fit_loglog_slope(taus, sigma):+.2f}")
