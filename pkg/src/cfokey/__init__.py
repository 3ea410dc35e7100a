"""cfokey: shared secret key generation from reciprocal carrier frequency
offsets.

Pipeline: model the CFO process, exchange BPSK frames, estimate the CFO
blindly by squaring, optionally Kalman-track the drift, quantize into
Gray-coded keys, reconcile with block-code syndromes, and privacy-amplify
with a Toeplitz hash.  The harness reproduces the key-disagreement-rate
and Eve-decipher-probability studies.
"""

from .amplify import HashSpec, amplify, identity_hash_spec, random_hash_spec
from .analysis import (
    RateReport,
    acf_empirical,
    acf_m2a,
    allan_deviation,
    entropy_rate_m2b,
    entropy_rate_m3,
    fit_loglog_slope,
    fractional_frequency,
    kgr_bound,
    key_slot_schedule,
    m2b_zero_crossing,
    next_key_slot,
)
from .estimator import (
    CalibrationTable,
    CfoEstimate,
    EstimatorConfig,
    LowConfidenceError,
    calibrate_error_std,
    estimate_cfo_blind,
    surrogate_estimate,
)
from .harness import (
    ExperimentConfig,
    MetricRecord,
    Transcript,
    build_calibration,
    emit_csv,
    load_config,
    parse_config_text,
    run_dpe_experiment,
    run_end_to_end,
    run_kdr_experiment,
)
from .kalman import KalmanState, filter_trace, kf_init, kf_step, steady_state_covariance
from .models import (
    MODEL_TAGS,
    CfoTrace,
    OscillatorSpec,
    generate_trace,
    pairwise_traces,
    reciprocal_of,
)
from .quantizer import (
    BitKey,
    QuantizerSpec,
    build_key,
    equiprobable_thresholds,
    gray_bit_map,
    quantize,
    quantize_many,
)
from .reconciliation import (
    LinearBlockCode,
    SyndromeMsg,
    authenticate,
    get_code,
    hamming_7_4,
    mark_syndrome_leakage,
    reconcile,
    syndrome_of,
    syndrome_leak_bits,
)
from .waveform import (
    BpskConfig,
    ChannelParams,
    ComplexSignal,
    apply_cfo,
    awgn_channel,
    read_iq,
    synth_bpsk,
    write_iq,
)

__version__ = "0.1.0"
