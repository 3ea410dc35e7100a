"""
One key-agreement session, step by step
=======================================

Alice and Bob measure their reciprocal CFO, quantize it into Gray-coded
bits, reconcile the mismatches with Hamming(7,4) syndromes, and hash away
the leaked bits.  Every intermediate artifact of the session is printed.
"""

from cfokey import ExperimentConfig, run_end_to_end
from cfokey.harness import build_calibration

config = ExperimentConfig(seed=99, demo_snr_db=18.0)
calibration = build_calibration(config)
t = run_end_to_end(config, calibration)

print(f"model {t.model}, surrogate noise at {t.snr_db:g} dB\n")
print("estimates of omega_AB (rad/s):")
for a, b in zip(t.estimates_a, t.estimates_b_negated):
    print(f"  Alice {a:+10.1f}   Bob(negated) {b:+10.1f}   delta {a - b:+8.2f}")

print(f"\nraw keys ({len(t.key_a)} bits):")
print(f"  K_A = {t.key_a}")
print(f"  K_B = {t.key_b}      raw KDR {t.kdr_raw:.3f}")

print(f"\nAlice publishes syndromes: {t.syndrome_wire.hex()} "
      f"(3 bits per block, {t.leaked_bits_a} bits leaked)")
print(f"  K_B' = {t.key_b_reconciled}      reconciled KDR {t.kdr_reconciled:.3f}")
print(f"  authenticated (distance 0): {t.authenticated}")

print(f"\nToeplitz hash seed: {t.hash_seed}")
print(f"final keys ({len(t.final_key_a)} bits, leakage reset to {t.final_leaked_bits}):")
print(f"  A: {t.final_key_a}")
print(f"  B: {t.final_key_b}")
print(f"final match: {t.final_match}")

# a misconfigured Bob (shifted thresholds) fails authentication
bad = run_end_to_end(config, calibration,
                     bob_threshold_offset=config.osc_spec().delta_omega / 3)
print(f"\nwith mismatched quantizers: authenticated = {bad.authenticated}")
