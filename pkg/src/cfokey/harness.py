"""Monte-Carlo experiment driver: KDR vs SNR, Eve decipher probability,
and the end-to-end key-agreement session.

Fidelity levels:

* ``surrogate`` models each CFO measurement as truth + N(0, sigma^2) with
  sigma(SNR) taken from the waveform-calibrated table; this reproduces the
  Gaussian estimation-error model and runs 1e5 trials in seconds.  Below
  the lowest SNR the calibration could validate, a link is in outage: the
  blind estimator would return a noise peak, so the measurement is drawn
  uniform over the search band, independent of the truth.
* ``waveform`` runs the full synth -> rotate -> AWGN -> blind-estimate
  chain per measurement; use small trial counts.

Every experiment point derives its randomness from (seed, experiment tag,
point coordinates), so results are reproducible and removing one grid
point never changes another.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, fields, replace

import numpy as np

from ._seeding import derive_rng, derive_seed
from .amplify import HashSpec, amplify, random_hash_spec
from .estimator import (
    CalibrationTable,
    CfoEstimate,
    EstimatorConfig,
    LowConfidenceError,
    calibrate_error_std,
    estimate_cfo_blind,
)
from .kalman import convergence_slot, filter_trace
from .models import MODEL_TAGS, OscillatorSpec, generate_trace
from .quantizer import BitKey, QuantizerSpec, equiprobable_thresholds, levels_to_bits, quantize_many
from .reconciliation import (
    LinearBlockCode,
    authenticate,
    get_code,
    mark_syndrome_leakage,
    reconcile,
    syndrome_of,
)
from .waveform import BpskConfig, ChannelParams, apply_cfo, awgn_channel, synth_bpsk

PA_SAFETY_MARGIN_BITS = 2


@dataclass(frozen=True)
class ExperimentConfig:
    """Declared parameters of a simulation run (all defaults overridable
    from a flat key = value config file)."""

    model: str = "M3"
    center_freq: float = 1.0e8  # Hz; with 5 ppm the CFO half-range is 500 Hz
    ppm_accuracy: float = 5.0
    q2_sq: float = 5.51e-18
    slot_duration: float = 0.05
    snr_grid: tuple = tuple(float(s) for s in range(0, 21, 2))
    dpe_ref_snr_db: float = 5.0
    demo_snr_db: float = 25.0
    eve_pathloss_ae_grid: tuple = (0.0, 5.0, 10.0, 15.0, 20.0)
    eve_pathloss_be_grid: tuple = (0.0, 5.0, 10.0, 15.0, 20.0)
    trials: int = 100000
    levels: int = 3
    key_len: int = 21
    code: str = "hamming74"
    fidelity: str = "surrogate"
    seed: int = 12345
    eta: float = 0.3
    # waveform/estimator parameters (short frames keep the per-measurement
    # noise in the regime the key-rate figures explore)
    symbol_rate: float = 10000.0
    samples_per_symbol: int = 4
    n_symbols: int = 32
    fft_size: int = 4096
    lpf_cutoff: float = 2500.0
    lpf_taps: int = 63
    window: str = "none"
    cal_snr_grid: tuple = tuple(float(s) for s in range(-10, 21, 2))
    cal_trials: int = 300
    kf_max_slots: int = 2000

    def __post_init__(self):
        if self.model not in MODEL_TAGS:
            raise ValueError(f"unknown model {self.model!r}")
        if self.fidelity not in ("surrogate", "waveform"):
            raise ValueError("fidelity must be 'surrogate' or 'waveform'")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.key_len < 1:
            raise ValueError("key_len must be >= 1")
        if self.levels < 2:
            raise ValueError("levels must be >= 2")
        if not (0.0 < self.eta < 1.0):
            raise ValueError("eta must lie in (0, 1)")
        for name in ("snr_grid", "eve_pathloss_ae_grid", "eve_pathloss_be_grid",
                     "cal_snr_grid"):
            if len(getattr(self, name)) == 0:
                raise ValueError(f"{name} must be non-empty")
        get_code(self.code)  # raises on unknown ids
        self.estimator_config()  # raises on sandwich violations

    # derived component configurations -------------------------------------

    def osc_spec(self) -> OscillatorSpec:
        return OscillatorSpec(
            ppm_accuracy=self.ppm_accuracy,
            center_freq=self.center_freq,
            q2_sq=self.q2_sq,
            slot_duration=self.slot_duration,
        )

    def bpsk_config(self) -> BpskConfig:
        return BpskConfig(
            symbol_rate=self.symbol_rate,
            samples_per_symbol=self.samples_per_symbol,
            n_symbols=self.n_symbols,
        )

    def estimator_config(self) -> EstimatorConfig:
        return EstimatorConfig(
            lpf_cutoff=self.lpf_cutoff,
            symbol_rate=self.symbol_rate,
            max_cfo_hz=self.osc_spec().delta_hz,
            lpf_taps=self.lpf_taps,
            fft_size=self.fft_size,
            window=self.window,
        )

    def quantizer_spec(self, threshold_offset: float = 0.0) -> QuantizerSpec:
        spec = self.osc_spec()
        if self.model == "M2b":
            dist = ("gaussian", 0.0, math.sqrt(spec.walk_increment_var))
        else:
            dist = ("uniform", spec.delta_omega)
        thresholds = equiprobable_thresholds(dist, self.levels) + threshold_offset
        return QuantizerSpec(levels=self.levels, thresholds=thresholds)

    @property
    def samples_per_key(self) -> int:
        bits_per = max(1, math.ceil(math.log2(self.levels)))
        return math.ceil(self.key_len / bits_per)


# config file parsing --------------------------------------------------------

_LIST_FIELDS = {"snr_grid", "eve_pathloss_ae_grid", "eve_pathloss_be_grid", "cal_snr_grid"}
_INT_FIELDS = {"trials", "levels", "key_len", "seed", "samples_per_symbol",
               "n_symbols", "fft_size", "lpf_taps", "cal_trials", "kf_max_slots"}
_STR_FIELDS = {"model", "code", "fidelity", "window"}


def parse_config_text(text: str) -> ExperimentConfig:
    """Parse the flat ``key = value`` config format; unknown keys rejected.

    Lists are comma-separated numbers; '#' starts a comment.
    """
    known = {f.name for f in fields(ExperimentConfig)}
    overrides = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in known:
            raise ValueError(f"line {lineno}: unknown config key {key!r}")
        if key in _LIST_FIELDS:
            overrides[key] = tuple(float(v) for v in value.split(",") if v.strip())
        elif key in _INT_FIELDS:
            overrides[key] = int(value)
        elif key in _STR_FIELDS:
            overrides[key] = value
        else:
            overrides[key] = float(value)
    return ExperimentConfig(**overrides)


def load_config(path) -> ExperimentConfig:
    with open(path) as fh:
        return parse_config_text(fh.read())


@dataclass
class MetricRecord:
    """One Monte-Carlo result row."""

    kind: str  # "kdr" or "dpe"
    snr_db: float | None = None
    pl_ae_db: float | None = None
    pl_be_db: float | None = None
    kdr_raw: float | None = None
    kdr_reconciled: float | None = None
    stderr_raw: float | None = None
    stderr_rec: float | None = None
    dpe: float | None = None
    dpe_stderr: float | None = None
    trials_used: int = 0

    def __post_init__(self):
        if self.kind not in ("kdr", "dpe"):
            raise ValueError("kind must be 'kdr' or 'dpe'")
        for name in ("kdr_raw", "kdr_reconciled", "dpe"):
            value = getattr(self, name)
            if value is not None and not (0.0 <= value <= 1.0):
                raise ValueError(f"{name} must lie in [0, 1], got {value}")


_CSV_COLUMNS = {
    "kdr": ("snr_db", "kdr_raw", "kdr_reconciled", "stderr_raw", "stderr_rec"),
    "dpe": ("pl_ae_db", "pl_be_db", "dpe", "dpe_stderr"),
}
_COORD_COLUMNS = {"snr_db", "pl_ae_db", "pl_be_db"}


def emit_csv(records, path, kind: str | None = None) -> None:
    """Write records as CSV: fixed column order, fractions to 6 decimals.

    Reruns with the same configuration and seed produce byte-identical
    files.  ``kind`` is only needed for an empty record list.
    """
    records = list(records)
    if records:
        kinds = {r.kind for r in records}
        if len(kinds) != 1:
            raise ValueError("records must share one kind")
        kind = records[0].kind
    if kind not in _CSV_COLUMNS:
        raise ValueError("kind must be 'kdr' or 'dpe'")
    columns = _CSV_COLUMNS[kind]
    with open(path, "w", newline="") as fh:
        fh.write(",".join(columns) + "\n")
        for rec in records:
            cells = []
            for col in columns:
                value = getattr(rec, col)
                cells.append(f"{value:.2f}" if col in _COORD_COLUMNS else f"{value:.6f}")
            fh.write(",".join(cells) + "\n")


# ---------------------------------------------------------------------------
# measurement layer
# ---------------------------------------------------------------------------


def build_calibration(config: ExperimentConfig) -> CalibrationTable:
    """Waveform-calibrated error table on the configured SNR grid."""
    return calibrate_error_std(
        config.cal_snr_grid,
        config.bpsk_config(),
        config.estimator_config(),
        trials=config.cal_trials,
        seed=derive_seed(config.seed, "calibration"),
    )


def _surrogate_draw(truth: np.ndarray, sigma: float, half_band: float,
                    rng: np.random.Generator) -> np.ndarray:
    """Measurements of ``truth``: Gaussian-error normally, uniform over the
    search band when the link is in outage (sigma = inf)."""
    if math.isinf(sigma):
        return rng.uniform(-half_band, half_band, size=truth.shape)
    return truth + rng.normal(0.0, sigma, size=truth.shape)


def _waveform_rotation_estimate(rotation: float, snr_db: float, pathloss_db: float,
                                config: ExperimentConfig, rng: np.random.Generator) -> float:
    """Blind estimate (rad/s) of one received frame's baseband rotation."""
    wf = config.bpsk_config()
    bits = rng.integers(0, 2, size=wf.n_symbols)
    phase = rng.uniform(0.0, 2.0 * math.pi)
    frame = apply_cfo(synth_bpsk(wf, bits), rotation, phase)
    rx = awgn_channel(frame, ChannelParams(snr_db=snr_db, pathloss_db=pathloss_db,
                                           noise_seed=int(rng.integers(0, 2**63))))
    try:
        return estimate_cfo_blind(rx, config.estimator_config()).value
    except LowConfidenceError as exc:
        return exc.estimate.value


def _key_bits(values: np.ndarray, qspec: QuantizerSpec, key_len: int) -> np.ndarray:
    """(trials, samples) measurements -> (trials, key_len) key bits."""
    levels = quantize_many(values, qspec)
    lut = np.asarray(qspec.bit_map, dtype=np.uint8)
    bits = lut[levels].reshape(values.shape[0], -1)
    return bits[:, :key_len]


def _reconcile_bits(local: np.ndarray, remote: np.ndarray, code: LinearBlockCode) -> np.ndarray:
    """Vectorized syndrome reconciliation of (trials, n) local keys toward
    the remote ones; mirrors :func:`cfokey.reconciliation.reconcile`."""
    n_trials, n = local.shape
    pad = (-n) % code.n_code
    if pad:
        z = np.zeros((n_trials, pad), dtype=np.uint8)
        local = np.hstack([local, z])
        remote = np.hstack([remote, z])
    blocks_l = local.reshape(n_trials, -1, code.n_code)
    blocks_r = remote.reshape(n_trials, -1, code.n_code)
    weights = 2 ** np.arange(code.syndrome_bits - 1, -1, -1)
    s_l = blocks_l @ code.parity_check.T % 2
    s_r = blocks_r @ code.parity_check.T % 2
    flips = code.coset_leaders[(s_l ^ s_r) @ weights]
    return (blocks_l ^ flips).reshape(n_trials, -1)[:, :n]


def _mean_stderr(per_trial: np.ndarray) -> tuple[float, float]:
    return float(np.mean(per_trial)), float(np.std(per_trial) / math.sqrt(per_trial.size))


def _kalman_filter_rows(z: np.ndarray, process_var: float, meas_var: float) -> np.ndarray:
    """Filter each row of (trials, slots) measurements with the scalar
    filter; the gain sequence depends only on (q, r), so it is shared."""
    q, r = process_var, meas_var
    n_slots = z.shape[1]
    est = np.empty_like(z)
    est[:, 0] = z[:, 0]
    p = r
    for k in range(1, n_slots):
        p_prior = p + q
        gain = p_prior / (p_prior + r)
        est[:, k] = est[:, k - 1] + gain * (z[:, k] - est[:, k - 1])
        p = (1.0 - gain) * p_prior
    return est


def _legit_measurements(config: ExperimentConfig, sigma: float, n_trials: int,
                        rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """Per-trial measurement rows for Alice and (negated) Bob, surrogate
    fidelity.  Bob's raw estimate targets -truth; the pipeline negates it
    before quantization, which is folded in here."""
    spec = config.osc_spec()
    half = spec.delta_omega
    s_key = config.samples_per_key

    if config.model == "M3":
        truth = rng.uniform(-half, half, size=(n_trials, s_key))
        alice = _surrogate_draw(truth, sigma, half, rng)
        bob = -_surrogate_draw(-truth, sigma, half, rng)
        return alice, bob

    if config.model == "M2a":
        q = spec.walk_increment_var
        r = sigma**2 if not math.isinf(sigma) else None
        if r is None:
            raise ValueError("legitimate link is in outage at this SNR; raise the SNR")
        burn = min(config.kf_max_slots, convergence_slot(q, r) + 2)
        n_slots = burn + s_key
        start = rng.uniform(-half, half, size=(n_trials, 1))
        steps = rng.normal(0.0, math.sqrt(q), size=(n_trials, n_slots - 1))
        truth = start + np.hstack([np.zeros((n_trials, 1)), np.cumsum(steps, axis=1)])
        za = truth + rng.normal(0.0, sigma, size=truth.shape)
        zb = truth + rng.normal(0.0, sigma, size=truth.shape)
        alice = _kalman_filter_rows(za, q, r)[:, burn:]
        bob = _kalman_filter_rows(zb, q, r)[:, burn:]
        return alice, bob

    raise ValueError(f"KDR/DPE experiments support M2a and M3, not {config.model!r}")


def _legit_measurements_waveform(config: ExperimentConfig, snr_db: float,
                                 calibration: CalibrationTable,
                                 trial_rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """One trial of full-waveform measurements (1 x samples rows).

    The party receiving a frame sees the remote-minus-local rotation, so
    Alice's rotation is -omega_AB and Bob's is +omega_AB; each estimates
    the named directed CFO by negating its rotation estimate, and Bob's
    result is negated once more by the pipeline.
    """
    spec = config.osc_spec()
    s_key = config.samples_per_key
    sigma = calibration.lookup(snr_db)
    if config.model == "M3":
        trace = generate_trace(spec, "M3", s_key, int(trial_rng.integers(0, 2**63)))
        alice = np.array([
            -_waveform_rotation_estimate(-w, snr_db, 0.0, config, trial_rng)
            for w in trace.values
        ])
        bob_named = np.array([
            -_waveform_rotation_estimate(+w, snr_db, 0.0, config, trial_rng)
            for w in trace.values
        ])
        return alice[None, :], -bob_named[None, :]
    if config.model == "M2a":
        if math.isinf(sigma):
            raise ValueError("legitimate link is in outage at this SNR; raise the SNR")
        burn = min(config.kf_max_slots, convergence_slot(spec.walk_increment_var, sigma**2) + 2)
        trace = generate_trace(spec, "M2a", burn + s_key, int(trial_rng.integers(0, 2**63)))
        raw_a, raw_b = [], []
        for w in trace.values:
            raw_a.append(-_waveform_rotation_estimate(-w, snr_db, 0.0, config, trial_rng))
            raw_b.append(+_waveform_rotation_estimate(+w, snr_db, 0.0, config, trial_rng))
        meas_a = [CfoEstimate(v, sigma, "blind") for v in raw_a]
        meas_b = [CfoEstimate(v, sigma, "blind") for v in raw_b]
        alice = filter_trace(meas_a, spec.walk_increment_var)[burn:]
        bob = filter_trace(meas_b, spec.walk_increment_var)[burn:]
        return alice[None, :], bob[None, :]
    raise ValueError(f"KDR/DPE experiments support M2a and M3, not {config.model!r}")


# ---------------------------------------------------------------------------
# experiments
# ---------------------------------------------------------------------------


def run_kdr_experiment(config: ExperimentConfig,
                       calibration: CalibrationTable | None = None) -> list[MetricRecord]:
    """Key disagreement rate over the SNR grid.

    Per trial: measure, (track for M2a), quantize both parties' estimates,
    count the mismatched fraction of the length-n keys, reconcile, count
    again.  Returns one record per SNR point with standard errors.
    """
    if calibration is None:
        calibration = build_calibration(config)
    qspec = config.quantizer_spec()
    code = get_code(config.code)
    n = config.key_len
    records = []
    for snr in config.snr_grid:
        rng = derive_rng(config.seed, "kdr", f"{snr:.6f}")
        if config.fidelity == "surrogate":
            sigma = calibration.lookup(snr)
            alice, bob = _legit_measurements(config, sigma, config.trials, rng)
        else:
            rows = [_legit_measurements_waveform(config, snr, calibration, rng)
                    for _ in range(config.trials)]
            alice = np.vstack([r[0] for r in rows])
            bob = np.vstack([r[1] for r in rows])
        ka = _key_bits(alice, qspec, n)
        kb = _key_bits(bob, qspec, n)
        raw = np.count_nonzero(ka ^ kb, axis=1) / n
        kb_rec = _reconcile_bits(kb, ka, code)
        rec = np.count_nonzero(ka ^ kb_rec, axis=1) / n
        kdr_raw, se_raw = _mean_stderr(raw)
        kdr_rec, se_rec = _mean_stderr(rec)
        records.append(MetricRecord(
            kind="kdr", snr_db=float(snr),
            kdr_raw=kdr_raw, kdr_reconciled=kdr_rec,
            stderr_raw=se_raw, stderr_rec=se_rec,
            trials_used=config.trials,
        ))
    return records


def run_dpe_experiment(config: ExperimentConfig,
                       calibration: CalibrationTable | None = None) -> list[MetricRecord]:
    """Eve's decipher probability over the excess-pathloss grid.

    Eve hears both legitimate transmissions; each of her links runs at the
    reference SNR minus that link's excess pathloss.  Her key quantizes
    est(omega_AE) - est(omega_BE), whose truth equals omega_AB by
    construction.  DPE is the average fraction of her bits matching the
    reconciled keys of Alice and Bob.
    """
    if config.model != "M3":
        raise ValueError("the DPE experiment is defined for model M3")
    if calibration is None:
        calibration = build_calibration(config)
    qspec = config.quantizer_spec()
    code = get_code(config.code)
    spec = config.osc_spec()
    half = spec.delta_omega
    n = config.key_len
    s_key = config.samples_per_key
    ref = config.dpe_ref_snr_db
    sigma_ref = calibration.lookup(ref)
    records = []
    for pl_ae in config.eve_pathloss_ae_grid:
        for pl_be in config.eve_pathloss_be_grid:
            rng = derive_rng(config.seed, "dpe", f"{pl_ae:.6f}", f"{pl_be:.6f}")
            shape = (config.trials, s_key)
            truth_ab = rng.uniform(-half, half, size=shape)
            osc_e = rng.uniform(-half / 2.0, half / 2.0, size=shape)
            w_ae = truth_ab / 2.0 - osc_e
            w_be = -truth_ab / 2.0 - osc_e

            if config.fidelity == "surrogate":
                alice = _surrogate_draw(truth_ab, sigma_ref, half, rng)
                bob = -_surrogate_draw(-truth_ab, sigma_ref, half, rng)
                est_ae = _surrogate_draw(w_ae, calibration.lookup(ref - pl_ae), half, rng)
                est_be = _surrogate_draw(w_be, calibration.lookup(ref - pl_be), half, rng)
            else:
                alice = np.empty(shape)
                bob = np.empty(shape)
                est_ae = np.empty(shape)
                est_be = np.empty(shape)
                for t in range(config.trials):
                    for s in range(s_key):
                        alice[t, s] = -_waveform_rotation_estimate(
                            -truth_ab[t, s], ref, 0.0, config, rng)
                        bob[t, s] = _waveform_rotation_estimate(
                            truth_ab[t, s], ref, 0.0, config, rng)
                        est_ae[t, s] = _waveform_rotation_estimate(
                            w_ae[t, s], ref - pl_ae, pl_ae, config, rng)
                        est_be[t, s] = _waveform_rotation_estimate(
                            w_be[t, s], ref - pl_be, pl_be, config, rng)

            ka = _key_bits(alice, qspec, n)
            kb = _key_bits(bob, qspec, n)
            ke = _key_bits(est_ae - est_be, qspec, n)
            kb_rec = _reconcile_bits(kb, ka, code)
            matched_a = 1.0 - np.count_nonzero(ke ^ ka, axis=1) / n
            matched_b = 1.0 - np.count_nonzero(ke ^ kb_rec, axis=1) / n
            dpe, se = _mean_stderr(0.5 * (matched_a + matched_b))
            records.append(MetricRecord(
                kind="dpe", pl_ae_db=float(pl_ae), pl_be_db=float(pl_be),
                dpe=dpe, dpe_stderr=se, trials_used=config.trials,
            ))
    return records


# ---------------------------------------------------------------------------
# end-to-end session
# ---------------------------------------------------------------------------


def _bitstring(key: BitKey) -> str:
    return "".join(str(int(b)) for b in key.bits)


@dataclass
class Transcript:
    """Every intermediate artifact of one key-agreement session."""

    model: str
    snr_db: float
    estimates_a: list
    estimates_b_negated: list
    key_a: str
    key_b: str
    kdr_raw: float
    syndrome_wire: bytes
    key_b_reconciled: str
    kdr_reconciled: float
    authenticated: bool
    leaked_bits_a: int
    leaked_bits_b: int
    hash_seed: str
    final_key_a: str
    final_key_b: str
    final_match: bool
    final_leaked_bits: int


def run_end_to_end(config: ExperimentConfig,
                   calibration: CalibrationTable | None = None,
                   session_seed: int | None = None,
                   bob_threshold_offset: float = 0.0) -> Transcript:
    """One full session: estimate, (track), quantize, reconcile, amplify.

    ``bob_threshold_offset`` shifts Bob's quantizer thresholds to model a
    misconfigured party; authentication then fails.  The final amplified
    keys are equal iff authenticate(reconciled_A, reconciled_B, 0) holds,
    up to hash collisions on unequal inputs.
    """
    if calibration is None:
        calibration = build_calibration(config)
    seed = config.seed if session_seed is None else session_seed
    rng = derive_rng(seed, "e2e")
    snr = config.demo_snr_db
    sigma = calibration.lookup(snr)

    one_trial = replace(config, trials=1, seed=derive_seed(seed, "e2e-meas"))
    if config.fidelity == "surrogate":
        alice_row, bob_row = _legit_measurements(one_trial, sigma, 1, rng)
    else:
        alice_row, bob_row = _legit_measurements_waveform(one_trial, snr, calibration, rng)

    qspec_a = config.quantizer_spec()
    qspec_b = config.quantizer_spec(threshold_offset=bob_threshold_offset)
    n = config.key_len
    code = get_code(config.code)

    bits_a = levels_to_bits(quantize_many(alice_row[0], qspec_a), qspec_a)[:n]
    bits_b = levels_to_bits(quantize_many(bob_row[0], qspec_b), qspec_b)[:n]
    key_a = BitKey(bits=bits_a, party_tag="A")
    key_b = BitKey(bits=bits_b, party_tag="B")
    kdr_raw = key_a.hamming_distance(key_b) / n

    msg = syndrome_of(key_a, code)
    key_a_rec = mark_syndrome_leakage(key_a, code)
    key_b_rec = reconcile(key_b, msg, code)
    kdr_rec = key_a_rec.hamming_distance(key_b_rec) / n
    ok = authenticate(key_a_rec, key_b_rec, 0)

    out_len = n - key_a_rec.leaked_bits - PA_SAFETY_MARGIN_BITS
    if out_len < 1:
        raise ValueError("key too short for privacy amplification after leakage")
    hash_spec = random_hash_spec(n, out_len, derive_seed(seed, "hash"))
    final_a = amplify(key_a_rec, hash_spec)
    final_b = amplify(key_b_rec, hash_spec)

    return Transcript(
        model=config.model,
        snr_db=snr,
        estimates_a=[float(v) for v in alice_row[0]],
        estimates_b_negated=[float(v) for v in bob_row[0]],
        key_a=_bitstring(key_a),
        key_b=_bitstring(key_b),
        kdr_raw=kdr_raw,
        syndrome_wire=msg.to_bytes(),
        key_b_reconciled=_bitstring(key_b_rec),
        kdr_reconciled=kdr_rec,
        authenticated=ok,
        leaked_bits_a=key_a_rec.leaked_bits,
        leaked_bits_b=key_b_rec.leaked_bits,
        hash_seed="".join(str(int(b)) for b in hash_spec.seed_bits),
        final_key_a=_bitstring(final_a),
        final_key_b=_bitstring(final_b),
        final_match=final_a == final_b,
        final_leaked_bits=final_a.leaked_bits,
    )
