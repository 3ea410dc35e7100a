"""Stochastic models of the carrier frequency offset between radios.

Four models cover the oscillator stability regimes:

* ``M1``  time-invariant CFO, a single uniform draw per node pair;
* ``M2a`` random-walk CFO (long-term stability regime);
* ``M2b`` the i.i.d. Gaussian increment process of the M2a walk;
* ``M3``  memoryless CFO, an independent uniform draw every slot.

All frequencies are rad/s internally; Hz appears only at I/O boundaries.
Reciprocity holds exactly at this layer: the B-to-A offset is the exact
negation of the A-to-B offset, per slot.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ._seeding import derive_rng, derive_seed

MODEL_TAGS = ("M1", "M2a", "M2b", "M3")


@dataclass(frozen=True)
class OscillatorSpec:
    """Oscillator stability parameters, shared by all nodes (homogeneous case).

    Attributes:
        ppm_accuracy: frequency tolerance in parts per million.
        center_freq: carrier center frequency in Hz.
        q2_sq: random-walk intensity coefficient (1/s); the per-slot
            increment variance of the M2a walk is omega_c^2 * q2_sq * T.
        slot_duration: slot length T in seconds.
    """

    ppm_accuracy: float
    center_freq: float
    q2_sq: float
    slot_duration: float

    def __post_init__(self):
        for name in ("ppm_accuracy", "center_freq", "q2_sq", "slot_duration"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ValueError(f"{name} must be finite and > 0, got {value}")

    @property
    def omega_c(self) -> float:
        """Carrier angular frequency in rad/s."""
        return 2.0 * math.pi * self.center_freq

    @property
    def delta_hz(self) -> float:
        """CFO half-range in Hz: center_freq[MHz] * ppm_accuracy."""
        return self.ppm_accuracy * self.center_freq * 1e-6

    @property
    def delta_omega(self) -> float:
        """CFO half-range in rad/s (2*pi*delta_hz)."""
        return 2.0 * math.pi * self.delta_hz

    @property
    def walk_increment_var(self) -> float:
        """Per-slot variance of the M2a random-walk increment, rad^2/s^2."""
        return self.omega_c**2 * self.q2_sq * self.slot_duration


@dataclass
class CfoTrace:
    """Per-slot true CFO values for one directed node pair."""

    model_tag: str
    values: np.ndarray
    seed: int
    slot_duration: float

    def __post_init__(self):
        if self.model_tag not in MODEL_TAGS:
            raise ValueError(f"unknown model tag {self.model_tag!r}")
        self.values = np.asarray(self.values, dtype=np.float64)
        if self.values.ndim != 1 or self.values.size == 0:
            raise ValueError("trace values must be a non-empty 1-D array")

    def __len__(self) -> int:
        return self.values.size


def generate_trace(
    spec: OscillatorSpec,
    model: str,
    n_slots: int,
    seed: int,
    *,
    m2a_init: str = "uniform",
) -> CfoTrace:
    """Generate one pairwise CFO trajectory.

    ``m2a_init`` selects the initial law of the M2a walk: ``"uniform"``
    draws omega(0) from U(-2*pi*delta, +2*pi*delta); ``"zero"`` starts the
    walk at exactly 0, which is the condition under which the closed-form
    autocorrelation sqrt(p/q) holds.

    Deterministic for fixed (seed, spec, model, n_slots).
    """
    if model not in MODEL_TAGS:
        raise ValueError(f"unknown model tag {model!r}")
    if n_slots < 1:
        raise ValueError("n_slots must be >= 1")
    if m2a_init not in ("uniform", "zero"):
        raise ValueError(f"unknown m2a_init {m2a_init!r}")

    if model == "M2b":
        # Exactly the first differences of a companion M2a trace.
        companion = generate_trace(spec, "M2a", n_slots + 1, seed, m2a_init=m2a_init)
        values = np.diff(companion.values)
        return CfoTrace("M2b", values, seed, spec.slot_duration)

    half = spec.delta_omega
    # M2a and M2b share a stream so the companion relation is exact.
    rng = derive_rng(seed, "trace", model)
    if model == "M1":
        values = np.full(n_slots, rng.uniform(-half, half))
    elif model == "M3":
        values = rng.uniform(-half, half, size=n_slots)
    else:  # M2a
        start = rng.uniform(-half, half) if m2a_init == "uniform" else 0.0
        steps = rng.normal(0.0, math.sqrt(spec.walk_increment_var), size=n_slots - 1)
        values = start + np.concatenate([[0.0], np.cumsum(steps)])
    return CfoTrace(model, values, seed, spec.slot_duration)


def reciprocal_of(trace: CfoTrace) -> CfoTrace:
    """Exact reciprocal trace: omega_BA(k) = -omega_AB(k) for all k."""
    return CfoTrace(trace.model_tag, -trace.values, trace.seed, trace.slot_duration)


def _oscillator_process(
    spec: OscillatorSpec, model: str, n_slots: int, rng: np.random.Generator
) -> np.ndarray:
    """Absolute-offset process of a single oscillator.

    Offsets live on half the pairwise range so that any pairwise difference
    stays inside (-2*pi*delta, +2*pi*delta); M2a increments carry half the
    pairwise variance so differences walk with the full variance.
    """
    half = spec.delta_omega / 2.0
    if model == "M1":
        return np.full(n_slots, rng.uniform(-half, half))
    if model == "M3":
        return rng.uniform(-half, half, size=n_slots)
    # M2a (and the companion walk behind M2b)
    start = rng.uniform(-half, half)
    steps = rng.normal(0.0, math.sqrt(spec.walk_increment_var / 2.0), size=n_slots - 1)
    return start + np.concatenate([[0.0], np.cumsum(steps)])


def pairwise_traces(
    spec: OscillatorSpec,
    model: str,
    n_slots: int,
    seed: int,
    *,
    mode: str = "consistent",
) -> dict[str, CfoTrace]:
    """All four CFO traces of the Alice/Bob/Eve triangle.

    Both modes preserve the identity omega_AE(k) - omega_BE(k) = omega_AB(k)
    and exact reciprocity trace_BA = -trace_AB.

    ``mode="consistent"`` draws one absolute-frequency process per
    oscillator, so every pairwise CFO is a difference of two independent
    half-range draws (triangular marginal on the full range).

    ``mode="pairwise_uniform"`` draws omega_AB directly from the model's
    stated pairwise law (uniform marginal) and derives Eve's links from an
    independently drawn oscillator-E process.  Use this when the quantizer
    thresholds assume the uniform model marginal.
    """
    if model not in MODEL_TAGS:
        raise ValueError(f"unknown model tag {model!r}")
    if mode not in ("consistent", "pairwise_uniform"):
        raise ValueError(f"unknown mode {mode!r}")
    if n_slots < 1:
        raise ValueError("n_slots must be >= 1")

    base = model if model != "M2b" else "M2a"
    n_gen = n_slots + 1 if model == "M2b" else n_slots

    if mode == "consistent":
        osc = {
            node: _oscillator_process(spec, base, n_gen, derive_rng(seed, "osc", node))
            for node in ("A", "B", "E")
        }
        ab = osc["A"] - osc["B"]
        ae = osc["A"] - osc["E"]
        be = osc["B"] - osc["E"]
    else:
        ab_trace = generate_trace(spec, base, n_gen, derive_seed(seed, "pair", "AB"))
        ab = ab_trace.values
        osc_e = _oscillator_process(spec, base, n_gen, derive_rng(seed, "osc", "E"))
        # omega_A := +ab/2, omega_B := -ab/2 keeps the triangle consistent.
        ae = ab / 2.0 - osc_e
        be = -ab / 2.0 - osc_e

    if model == "M2b":
        ab, ae, be = np.diff(ab), np.diff(ae), np.diff(be)

    make = lambda v: CfoTrace(model, v, seed, spec.slot_duration)
    return {"AB": make(ab), "BA": make(-ab), "AE": make(ae), "BE": make(be)}
