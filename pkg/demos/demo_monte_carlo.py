"""
Monte-Carlo sweeps: KDR vs SNR and Eve's decipher probability
=============================================================

A scaled-down version of the two headline experiments (the CLI runs the
full-size ones).  KDR falls exponentially with the legitimate link's SNR;
Eve's decipher probability collapses toward a coin flip as soon as either
of her links degrades past the estimator's breakdown point.
"""

from dataclasses import replace

from cfokey import ExperimentConfig, run_dpe_experiment, run_kdr_experiment
from cfokey.harness import build_calibration

config = ExperimentConfig(trials=5000, seed=11)
calibration = build_calibration(config)

print("KDR vs SNR (M3, surrogate fidelity, 5000 trials/point):")
print("  snr_db    kdr_raw    kdr_reconciled")
for rec in run_kdr_experiment(config, calibration):
    print(f"  {rec.snr_db:6.1f}   {rec.kdr_raw:.6f}   {rec.kdr_reconciled:.6f}")

print("\nKalman tracking under the random-walk model cuts the noise further:")
m2a = replace(config, model="M2a", trials=2000, snr_grid=(0.0, 10.0, 20.0))
for rec in run_kdr_experiment(m2a, calibration):
    print(f"  {rec.snr_db:6.1f}   {rec.kdr_raw:.6f}   {rec.kdr_reconciled:.6f}")

print("\nDPE heat map (rows: A-E excess loss, cols: B-E excess loss, dB):")
records = run_dpe_experiment(replace(config, trials=4000), calibration)
axes = sorted({rec.pl_ae_db for rec in records})
cells = {(rec.pl_ae_db, rec.pl_be_db): rec.dpe for rec in records}
print("        " + "".join(f"{b:7.0f}" for b in axes))
for a in axes:
    print(f"  {a:5.0f} " + "".join(f"  {cells[(a, b)]:.3f}" for b in axes))
print("\nEve matches ~99% of key bits on equal footing but only ~55% once both")
print("her links sit ~20 dB below the legitimate one.")
