"""Blind CFO estimation from BPSK frames by squaring, plus the Gaussian
error surrogate used for fast Monte-Carlo runs.

Squaring a BPSK frame removes the data modulation entirely (a_k^2 = 1), so
no pilot is needed: y^2(t) = f(t) * exp(j*4*pi*df*t) with f(t) periodic at
the symbol rate.  Low-pass filtering isolates the DC Fourier term
(a0/2) * exp(j*4*pi*df*t), a pure tone at twice the CFO.  The estimate is
the signed frequency of the FFT magnitude peak, halved.  Constant phase
factors drop out of the magnitude, so the estimator is phase-blind, and a
positive scale shifts the log-magnitude spectrum uniformly, so it is
amplitude-blind as well.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ._seeding import derive_rng
from .waveform import BpskConfig, ChannelParams, ComplexSignal, apply_cfo, awgn_channel, synth_bpsk

#: magnitude ratio (dB) of peak over median in-band bin below which an
#: estimate is flagged low-confidence
CONFIDENCE_THRESHOLD_DB = 6.0


class LowConfidenceError(RuntimeError):
    """Peak did not clear the noise floor; carries the raw estimate anyway."""

    def __init__(self, estimate: "CfoEstimate", ratio_db: float):
        super().__init__(
            f"peak/median ratio {ratio_db:.2f} dB below {CONFIDENCE_THRESHOLD_DB} dB"
        )
        self.estimate = estimate
        self.ratio_db = ratio_db


@dataclass(frozen=True)
class EstimatorConfig:
    """Blind estimator parameters.

    The cutoff must satisfy the sandwich 2*max_cfo_hz < lpf_cutoff <
    symbol_rate: the squared signal carries its tone at twice the CFO and
    its first data harmonic at the symbol rate.  The peak search is
    restricted to |f| <= 2*max_cfo_hz in the squared-signal spectrum, so
    estimates always land in [-max_cfo_hz, +max_cfo_hz].
    """

    lpf_cutoff: float
    symbol_rate: float
    max_cfo_hz: float
    lpf_taps: int = 129
    fft_size: int = 65536
    window: str = "none"

    def __post_init__(self):
        if self.max_cfo_hz <= 0:
            raise ValueError("max_cfo_hz must be > 0")
        if not (2.0 * self.max_cfo_hz < self.lpf_cutoff < self.symbol_rate):
            raise ValueError(
                "sandwich violated: need 2*max_cfo_hz < lpf_cutoff < symbol_rate, got "
                f"{2.0 * self.max_cfo_hz} / {self.lpf_cutoff} / {self.symbol_rate}"
            )
        if self.fft_size < 2 or self.fft_size & (self.fft_size - 1):
            raise ValueError("fft_size must be a power of two")
        if self.lpf_taps < 3 or self.lpf_taps % 2 == 0:
            raise ValueError("lpf_taps must be odd and >= 3")
        if self.window not in ("none", "hann"):
            raise ValueError("window must be 'none' or 'hann'")


@dataclass(frozen=True)
class CfoEstimate:
    """A CFO measurement in rad/s with its error-std proxy.

    ``error_std`` is 0.0 when unknown (raw blind estimates); calibrated or
    surrogate estimates carry the Gaussian error standard deviation.
    """

    value: float
    error_std: float
    source: str = "blind"

    def __post_init__(self):
        if self.error_std < 0:
            raise ValueError("error_std must be >= 0")
        if self.source not in ("blind", "surrogate", "kalman"):
            raise ValueError(f"unknown estimate source {self.source!r}")


def _lowpass_taps(n_taps: int, cutoff_hz: float, sample_rate: float) -> np.ndarray:
    """Linear-phase windowed-sinc FIR (Hamming window), unit DC gain."""
    fc = cutoff_hz / sample_rate
    k = np.arange(n_taps) - (n_taps - 1) / 2
    h = 2.0 * fc * np.sinc(2.0 * fc * k)
    h *= np.hamming(n_taps)
    return h / np.sum(h)


def _parabolic_offset(m_left: float, m_center: float, m_right: float) -> float:
    """Sub-bin peak offset from 3-point parabolic fit on log magnitude."""
    floor = m_center * 1e-12 + 1e-300
    a = math.log(max(m_left, floor))
    b = math.log(max(m_center, floor))
    c = math.log(max(m_right, floor))
    denom = a - 2.0 * b + c
    if denom >= 0.0 or not math.isfinite(denom):
        return 0.0
    return min(0.5, max(-0.5, 0.5 * (a - c) / denom))


def estimate_cfo_blind(signal: ComplexSignal, config: EstimatorConfig) -> CfoEstimate:
    """Estimate the CFO (rad/s) of a received BPSK frame without pilots.

    Pipeline: square the samples, low-pass filter, window, zero-padded FFT,
    locate the signed in-band magnitude peak with parabolic refinement, and
    halve the peak frequency.

    Raises LowConfidenceError (carrying the raw estimate) when the peak does
    not clear the in-band median by CONFIDENCE_THRESHOLD_DB.
    """
    n = len(signal)
    fs = signal.sample_rate
    sps = fs / config.symbol_rate
    if n < 8 * sps:
        raise ValueError(f"frame too short: need >= {int(8 * sps)} samples, got {n}")
    if config.fft_size < n:
        raise ValueError("fft_size must be >= signal length")
    if config.lpf_taps >= n:
        raise ValueError("lpf_taps must be shorter than the frame")

    squared = signal.samples**2
    taps = _lowpass_taps(config.lpf_taps, config.lpf_cutoff, fs)
    # 'same' keeps alignment, compensating the FIR group delay
    filtered = np.convolve(squared, taps, mode="same")
    if config.window == "hann":
        filtered = filtered * np.hanning(n)

    spectrum = np.fft.fft(filtered, config.fft_size)
    freqs = np.fft.fftfreq(config.fft_size, d=1.0 / fs)
    mag = np.abs(spectrum)

    band = np.abs(freqs) <= 2.0 * config.max_cfo_hz + 1e-9
    in_band = np.where(band, mag, -np.inf)
    k = int(np.argmax(in_band))

    # neighbors come from the full spectrum; the mask only selects the peak
    left = mag[(k - 1) % config.fft_size]
    right = mag[(k + 1) % config.fft_size]
    offset = _parabolic_offset(left, mag[k], right)
    df = fs / config.fft_size
    f_peak = freqs[k] + offset * df

    value = 2.0 * math.pi * f_peak / 2.0
    result = CfoEstimate(value=value, error_std=0.0, source="blind")

    band_median = float(np.median(mag[band]))
    if band_median > 0.0:
        ratio_db = 20.0 * math.log10(mag[k] / band_median)
        if ratio_db < CONFIDENCE_THRESHOLD_DB:
            raise LowConfidenceError(result, ratio_db)
    return result


def surrogate_estimate(true_cfo: float, error_std: float, seed: int) -> CfoEstimate:
    """Fast Monte-Carlo stand-in: true value plus N(0, error_std^2) noise."""
    if error_std < 0:
        raise ValueError("error_std must be >= 0")
    noise = derive_rng(seed, "surrogate").normal(0.0, error_std) if error_std else 0.0
    return CfoEstimate(value=true_cfo + noise, error_std=error_std, source="surrogate")


# --------------------------------------------------------------------------
# empirical calibration of the estimation-error standard deviation vs SNR
# --------------------------------------------------------------------------


@dataclass
class CalibrationTable:
    """Per-SNR estimation-error standard deviation (rad/s).

    Points where more than half the trials were low-confidence are kept but
    marked invalid: there the estimator is saturated and its output is
    essentially a uniform draw over the search band.  ``outage_std`` is the
    analytic error standard deviation of that regime.
    """

    snr_db: np.ndarray
    error_std: np.ndarray
    low_conf_rate: np.ndarray
    valid: np.ndarray
    max_cfo_hz: float

    OUTAGE = math.inf

    @property
    def outage_std(self) -> float:
        """Error std (rad/s) when the estimate is uniform over the band and
        independent of a uniform truth over the same band."""
        half = 2.0 * math.pi * self.max_cfo_hz
        return math.sqrt(2.0 * half**2 / 3.0)

    def lookup(self, snr_db: float) -> float:
        """Interpolated error std at ``snr_db``; math.inf marks outage.

        Interpolation is linear in (snr, log std) across valid points and
        clamps at the top end.  Below the lowest valid point the link is in
        outage: the estimator no longer tracks the truth at all, so a
        Gaussian error model does not apply (callers should treat the
        estimate as uniform over the search band).
        """
        mask = self.valid.astype(bool)
        if not mask.any():
            return self.OUTAGE
        snrs = self.snr_db[mask]
        stds = self.error_std[mask]
        if snr_db < snrs.min():
            return self.OUTAGE
        if snr_db >= snrs.max():
            return float(stds[np.argmax(snrs)])
        return float(np.exp(np.interp(snr_db, snrs, np.log(stds))))

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            fh.write("snr_db,error_std_hz,low_conf_rate,valid\n")
            for s, e, r, v in zip(self.snr_db, self.error_std, self.low_conf_rate, self.valid):
                fh.write(f"{s:.2f},{e / (2.0 * math.pi):.6f},{r:.6f},{int(v)}\n")

    @classmethod
    def from_csv(cls, path, max_cfo_hz: float) -> "CalibrationTable":
        rows = np.genfromtxt(path, delimiter=",", skip_header=1, ndmin=2)
        return cls(
            snr_db=rows[:, 0],
            error_std=rows[:, 1] * 2.0 * math.pi,
            low_conf_rate=rows[:, 2],
            valid=rows[:, 3].astype(bool),
            max_cfo_hz=max_cfo_hz,
        )


def calibrate_error_std(
    snr_grid,
    wf_config: BpskConfig,
    est_config: EstimatorConfig,
    trials: int = 300,
    seed: int = 0,
) -> CalibrationTable:
    """Measure std(estimate - truth) per SNR over the full waveform chain.

    Each trial draws a uniform CFO in [-max_cfo, +max_cfo], random bits and
    a random initial phase, runs synth -> cfo -> channel -> blind estimate,
    and records the error.  Low-confidence estimates are included in the
    statistic (their raw value is what a receiver would be left with); the
    rate is reported and points above 50% are marked invalid.
    """
    if trials < 100:
        raise ValueError("need >= 100 trials per SNR point")
    snr_grid = list(snr_grid)
    stds, rates = [], []
    for snr in snr_grid:
        tag = f"{snr:.6f}"
        errors = np.empty(trials)
        low_conf = 0
        for t in range(trials):
            rng = derive_rng(seed, "cal", tag, t)
            true_hz = rng.uniform(-est_config.max_cfo_hz, est_config.max_cfo_hz)
            true = 2.0 * math.pi * true_hz
            bits = rng.integers(0, 2, size=wf_config.n_symbols)
            phase = rng.uniform(0.0, 2.0 * math.pi)
            frame = apply_cfo(synth_bpsk(wf_config, bits), true, phase)
            rx = awgn_channel(
                frame, ChannelParams(snr_db=snr, noise_seed=int(rng.integers(0, 2**63)))
            )
            try:
                est = estimate_cfo_blind(rx, est_config)
            except LowConfidenceError as exc:
                est = exc.estimate
                low_conf += 1
            errors[t] = est.value - true
        stds.append(float(np.std(errors)))
        rates.append(low_conf / trials)
    rates = np.asarray(rates)
    return CalibrationTable(
        snr_db=np.asarray(snr_grid, dtype=float),
        error_std=np.asarray(stds),
        low_conf_rate=rates,
        valid=rates <= 0.5,
        max_cfo_hz=est_config.max_cfo_hz,
    )
