"""BPSK baseband synthesis, CFO rotation, and AWGN impairment.

The receive model is y(t) = x(t) * exp(j*(omega*t + phi)) + noise, with
optional pathloss scaling ahead of the noise.  SNR is defined post-pathloss
at the receiver input as the per-sample average power ratio.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._seeding import derive_rng

PULSES = ("rectangular", "rrc")


@dataclass(frozen=True)
class BpskConfig:
    symbol_rate: float
    samples_per_symbol: int
    n_symbols: int
    pulse: str = "rectangular"
    roll_off: float = 0.35
    amplitude: float = 1.0

    def __post_init__(self):
        if self.symbol_rate <= 0:
            raise ValueError("symbol_rate must be > 0")
        # squaring doubles bandwidth; 4 samples/symbol is the floor
        if self.samples_per_symbol < 4:
            raise ValueError("samples_per_symbol must be >= 4")
        if self.n_symbols < 1:
            raise ValueError("n_symbols must be >= 1")
        if self.pulse not in PULSES:
            raise ValueError(f"pulse must be one of {PULSES}")
        if self.pulse == "rrc" and not (0.0 < self.roll_off <= 1.0):
            raise ValueError("roll_off must lie in (0, 1]")
        if self.amplitude <= 0:
            raise ValueError("amplitude must be > 0")

    @property
    def sample_rate(self) -> float:
        return self.symbol_rate * self.samples_per_symbol

    @property
    def n_samples(self) -> int:
        return self.n_symbols * self.samples_per_symbol


@dataclass
class ComplexSignal:
    """Sampled complex baseband waveform."""

    sample_rate: float
    samples: np.ndarray

    def __post_init__(self):
        self.samples = np.asarray(self.samples, dtype=np.complex128)
        if self.samples.ndim != 1 or self.samples.size == 0:
            raise ValueError("samples must be a non-empty 1-D array")
        if not np.all(np.isfinite(self.samples.view(np.float64))):
            raise ValueError("samples contain NaN or Inf")
        if self.sample_rate <= 0:
            raise ValueError("sample_rate must be > 0")

    def __len__(self) -> int:
        return self.samples.size


@dataclass(frozen=True)
class ChannelParams:
    """snr_db may be math.inf to disable noise; pathloss_db is excess loss
    relative to the Alice-Bob reference link."""

    snr_db: float
    pathloss_db: float = 0.0
    noise_seed: int = 0

    def __post_init__(self):
        if math.isnan(self.snr_db):
            raise ValueError("snr_db must not be NaN")
        if self.pathloss_db < 0:
            raise ValueError("pathloss_db must be >= 0")


def _rrc_taps(sps: int, beta: float, span: int = 10) -> np.ndarray:
    """Root-raised-cosine taps over ``span`` symbols, unit energy."""
    n = span * sps + 1
    t = (np.arange(n) - (n - 1) / 2) / sps  # in symbol periods
    taps = np.empty(n)
    for i, ti in enumerate(t):
        if abs(ti) < 1e-12:
            taps[i] = 1.0 - beta + 4.0 * beta / math.pi
        elif abs(abs(4.0 * beta * ti) - 1.0) < 1e-9:
            taps[i] = (beta / math.sqrt(2.0)) * (
                (1.0 + 2.0 / math.pi) * math.sin(math.pi / (4.0 * beta))
                + (1.0 - 2.0 / math.pi) * math.cos(math.pi / (4.0 * beta))
            )
        else:
            num = math.sin(math.pi * ti * (1.0 - beta)) + 4.0 * beta * ti * math.cos(
                math.pi * ti * (1.0 + beta)
            )
            den = math.pi * ti * (1.0 - (4.0 * beta * ti) ** 2)
            taps[i] = num / den
    return taps / math.sqrt(np.sum(taps**2))


def synth_bpsk(config: BpskConfig, bits=None, seed: int = 0) -> ComplexSignal:
    """Synthesize a BPSK frame.  Bit 1 maps to +amplitude, bit 0 to -amplitude.

    When ``bits`` is None, n_symbols random bits are drawn from ``seed``.
    """
    if bits is None:
        bits = derive_rng(seed, "bits").integers(0, 2, size=config.n_symbols)
    bits = np.asarray(bits)
    if bits.size == 0:
        raise ValueError("bits must be non-empty")
    if bits.size != config.n_symbols:
        raise ValueError(f"expected {config.n_symbols} bits, got {bits.size}")
    symbols = 2.0 * bits.astype(np.float64) - 1.0

    if config.pulse == "rectangular":
        wave = np.repeat(symbols, config.samples_per_symbol) * config.amplitude
    else:
        upsampled = np.zeros(config.n_samples)
        upsampled[:: config.samples_per_symbol] = symbols
        taps = _rrc_taps(config.samples_per_symbol, config.roll_off)
        wave = np.convolve(upsampled, taps, mode="same")
        # match rectangular per-sample power on average
        wave *= config.amplitude * math.sqrt(config.samples_per_symbol)
    return ComplexSignal(config.sample_rate, wave.astype(np.complex128))


def apply_cfo(signal: ComplexSignal, cfo: float, initial_phase: float = 0.0) -> ComplexSignal:
    """Rotate samples by exp(j*(cfo * i / fs + initial_phase)); cfo in rad/s."""
    if abs(cfo) >= math.pi * signal.sample_rate:
        raise ValueError("cfo would alias: |cfo| must be < pi * sample_rate")
    i = np.arange(len(signal))
    phase = cfo * i / signal.sample_rate + initial_phase
    return ComplexSignal(signal.sample_rate, signal.samples * np.exp(1j * phase))


def awgn_channel(signal: ComplexSignal, params: ChannelParams) -> ComplexSignal:
    """Scale by pathloss and add circular complex Gaussian noise.

    Noise variance is set so the per-sample SNR after pathloss equals
    ``params.snr_db``; ``snr_db = inf`` returns the scaled input exactly.
    Bit-reproducible for a fixed noise_seed.
    """
    gain = 10.0 ** (-params.pathloss_db / 20.0)
    out = signal.samples * gain
    if not math.isinf(params.snr_db):
        sig_power = np.mean(np.abs(out) ** 2)
        noise_var = sig_power / 10.0 ** (params.snr_db / 10.0)
        rng = derive_rng(params.noise_seed, "awgn")
        scale = math.sqrt(noise_var / 2.0)
        noise = scale * (rng.standard_normal(out.size) + 1j * rng.standard_normal(out.size))
        out = out + noise
    return ComplexSignal(signal.sample_rate, out)


def write_iq(signal: ComplexSignal, path) -> None:
    """Dump interleaved little-endian float32 I/Q pairs, no header."""
    inter = np.empty(2 * len(signal), dtype="<f4")
    inter[0::2] = signal.samples.real
    inter[1::2] = signal.samples.imag
    inter.tofile(path)


def read_iq(path, sample_rate: float) -> ComplexSignal:
    """Read a file produced by :func:`write_iq` (sample rate is external)."""
    inter = np.fromfile(path, dtype="<f4")
    if inter.size == 0 or inter.size % 2:
        raise ValueError("malformed I/Q dump")
    return ComplexSignal(sample_rate, inter[0::2] + 1j * inter[1::2])
