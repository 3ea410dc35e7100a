"""Command-line driver for the simulation experiments.

Subcommands: kdr, dpe, acf, kgr, allan, calibrate, demo.  Each reads the
optional flat key=value config file, applies flag overrides, and writes
its CSV(s) into --out.  Reruns with the same config and seed are
byte-identical.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import analysis
from ._seeding import derive_seed
from .estimator import CalibrationTable
from .harness import (
    ExperimentConfig,
    build_calibration,
    emit_csv,
    load_config,
    run_dpe_experiment,
    run_end_to_end,
    run_kdr_experiment,
)
from .models import generate_trace


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cfokey",
        description="Secret key generation from reciprocal carrier frequency offsets",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, helptext in [
        ("kdr", "key disagreement rate vs SNR -> kdr.csv"),
        ("dpe", "Eve decipher probability heat map -> dpe.csv"),
        ("acf", "analytic vs empirical autocorrelation -> acf.csv"),
        ("kgr", "key-generation rate bounds and key schedule -> keyinterval.csv"),
        ("allan", "Allan deviation of simulated traces -> allan.csv"),
        ("calibrate", "estimator error-std vs SNR -> calibration.csv"),
        ("demo", "one end-to-end key agreement session"),
    ]:
        cmd = sub.add_parser(name, help=helptext)
        cmd.add_argument("--config", type=Path, help="flat key=value config file")
        cmd.add_argument("--seed", type=int, help="override the config seed")
        cmd.add_argument("--out", type=Path, default=Path("."), help="output directory")
        cmd.add_argument("--fidelity", choices=("surrogate", "waveform"),
                         help="override the config fidelity")
        cmd.add_argument("--trials", type=int, help="override the config trial count")
    return parser


def _load(args) -> ExperimentConfig:
    config = load_config(args.config) if args.config else ExperimentConfig()
    overrides = {}
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.fidelity is not None:
        overrides["fidelity"] = args.fidelity
    if args.trials is not None:
        overrides["trials"] = args.trials
    return replace(config, **overrides) if overrides else config


def _calibration(config: ExperimentConfig, out: Path) -> CalibrationTable:
    """Load calibration.csv from the output directory if present, else
    compute it (and leave it behind for the next run)."""
    path = out / "calibration.csv"
    if path.exists():
        return CalibrationTable.from_csv(path, config.osc_spec().delta_hz)
    table = build_calibration(config)
    table.to_csv(path)
    return table


def _cmd_calibrate(config: ExperimentConfig, out: Path) -> None:
    table = build_calibration(config)
    table.to_csv(out / "calibration.csv")
    valid = int(np.count_nonzero(table.valid))
    print(f"calibration.csv written: {table.snr_db.size} SNR points, {valid} valid")


def _cmd_kdr(config: ExperimentConfig, out: Path) -> None:
    records = run_kdr_experiment(config, _calibration(config, out))
    emit_csv(records, out / "kdr.csv")
    for rec in records:
        print(f"snr={rec.snr_db:6.2f} dB  kdr_raw={rec.kdr_raw:.6f}  "
              f"kdr_rec={rec.kdr_reconciled:.6f}")


def _cmd_dpe(config: ExperimentConfig, out: Path) -> None:
    records = run_dpe_experiment(config, _calibration(config, out))
    emit_csv(records, out / "dpe.csv")
    best = max(records, key=lambda r: r.dpe)
    worst = min(records, key=lambda r: r.dpe)
    print(f"dpe.csv written: {len(records)} cells, "
          f"max {best.dpe:.3f} at ({best.pl_ae_db:g},{best.pl_be_db:g}) dB, "
          f"min {worst.dpe:.3f} at ({worst.pl_ae_db:g},{worst.pl_be_db:g}) dB")


_ACF_PAIRS = ((10, 20), (25, 100), (50, 500))


def _cmd_acf(config: ExperimentConfig, out: Path) -> None:
    spec = config.osc_spec()
    n_traces = min(config.trials, 10000)
    n_slots = max(q for _, q in _ACF_PAIRS) + 1
    with open(out / "acf.csv", "w", newline="") as fh:
        fh.write("model,p,q,acf_analytic,acf_empirical\n")
        for model in ("M2a", "M3"):
            init = {"m2a_init": "zero"} if model == "M2a" else {}
            traces = [
                generate_trace(spec, model, n_slots, derive_seed(config.seed, "acf", model, i),
                               **init)
                for i in range(n_traces)
            ]
            for p, q in _ACF_PAIRS:
                analytic = analysis.acf_m2a(p, q) if model == "M2a" else 0.0
                empirical = analysis.acf_empirical(traces, p, q)
                fh.write(f"{model},{p},{q},{analytic:.6f},{empirical:.6f}\n")
    print(f"acf.csv written: {2 * len(_ACF_PAIRS)} rows over {n_traces} traces")


def _cmd_kgr(config: ExperimentConfig, out: Path) -> None:
    spec = config.osc_spec()
    for tag in ("M3", "M2b", "M2a"):
        report = analysis.kgr_bound(tag, spec, eta=config.eta)
        line = (f"{tag}: entropy {report.entropy_rate:.3f} bits/realization, "
                f"interval {report.realization_interval:.3g} s, "
                f"KGR <= {report.kgr_bound:.3f} bits/s")
        if report.note:
            line += f"  [{report.note}]"
        print(line)
    slots = analysis.key_slot_schedule(config.eta, 10)
    with open(out / "keyinterval.csv", "w", newline="") as fh:
        fh.write("key_index,slot,time_s,ratio_to_prev\n")
        for i, slot in enumerate(slots):
            ratio = slots[i] / slots[i - 1] if i else float("nan")
            fh.write(f"{i},{slot},{slot * spec.slot_duration:.6f},{ratio:.6f}\n")
    print(f"keyinterval.csv written: {len(slots)} keys, eta={config.eta}")


def _cmd_allan(config: ExperimentConfig, out: Path) -> None:
    spec = config.osc_spec()
    n_slots = 100000
    with open(out / "allan.csv", "w", newline="") as fh:
        fh.write("model,tau_s,sigma_y\n")
        for model in ("M2a", "M3"):
            trace = generate_trace(spec, model, n_slots, derive_seed(config.seed, "allan", model))
            y = analysis.fractional_frequency(trace, spec)
            taus = analysis.default_taus(n_slots, spec.slot_duration)
            sigmas = analysis.allan_deviation(y, spec.slot_duration, taus)
            for tau, sigma in zip(taus, sigmas):
                fh.write(f"{model},{tau:.6f},{sigma:.9e}\n")
            slope = analysis.fit_loglog_slope(taus, sigmas)
            print(f"{model}: fitted log-log slope {slope:+.3f}")
    print("allan.csv written")


def _cmd_demo(config: ExperimentConfig, out: Path) -> None:
    transcript = run_end_to_end(config, _calibration(config, out))
    print(f"model {transcript.model} at {transcript.snr_db:g} dB ({config.fidelity})")
    print(f"estimates at Alice (rad/s): "
          + ", ".join(f"{v:+.1f}" for v in transcript.estimates_a[:6])
          + (" ..." if len(transcript.estimates_a) > 6 else ""))
    print(f"raw keys     A={transcript.key_a}  B={transcript.key_b}"
          f"  (kdr {transcript.kdr_raw:.3f})")
    print(f"syndrome wire bytes: {transcript.syndrome_wire.hex()}")
    print(f"reconciled   A={transcript.key_a}  B={transcript.key_b_reconciled}"
          f"  (kdr {transcript.kdr_reconciled:.3f}, leaked "
          f"{transcript.leaked_bits_a}+{transcript.leaked_bits_b} bits)")
    print(f"authenticated: {transcript.authenticated}")
    print(f"amplified    A={transcript.final_key_a}  B={transcript.final_key_b}"
          f"  (leaked {transcript.final_leaked_bits} bits)")
    print(f"final match: {transcript.final_match}")


_COMMANDS = {
    "calibrate": _cmd_calibrate,
    "kdr": _cmd_kdr,
    "dpe": _cmd_dpe,
    "acf": _cmd_acf,
    "kgr": _cmd_kgr,
    "allan": _cmd_allan,
    "demo": _cmd_demo,
}


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        config = _load(args)
        args.out.mkdir(parents=True, exist_ok=True)
        _COMMANDS[args.command](config, args.out)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
