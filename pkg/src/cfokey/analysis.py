"""Closed-form and empirical analysis of the CFO source.

Differential entropy rates per realization, the random-walk
autocorrelation and the decorrelation schedule it implies, key-generation
rate bounds, and the overlapping Allan deviation of simulated traces.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .models import CfoTrace, OscillatorSpec


def entropy_rate_m2b(omega_c: float, q2_sq: float, slot_duration: float) -> float:
    """Differential entropy of one walk increment, bits/realization:
    0.5 * log2(2*pi*e * omega_c^2 * q2^2 * T)."""
    if omega_c <= 0 or q2_sq <= 0 or slot_duration <= 0:
        raise ValueError("omega_c, q2_sq and slot_duration must be > 0")
    return 0.5 * math.log2(2.0 * math.pi * math.e * omega_c**2 * q2_sq * slot_duration)


def m2b_zero_crossing(q2_sq: float) -> float:
    """The omega_c^2 * T product at which the increment entropy hits zero:
    1 / (2*pi*e * q2^2)."""
    if q2_sq <= 0:
        raise ValueError("q2_sq must be > 0")
    return 1.0 / (2.0 * math.pi * math.e * q2_sq)


def entropy_rate_m3(delta_hz: float) -> float:
    """Differential entropy of one uniform CFO draw, bits/realization:
    log2(4*pi*delta).  Zero exactly at delta = 1/(4*pi) Hz."""
    if delta_hz <= 0:
        raise ValueError("delta_hz must be > 0")
    return math.log2(4.0 * math.pi * delta_hz)


def acf_m2a(p: int, q: int) -> float:
    """Autocorrelation sqrt(p/q) of the zero-start random walk between
    slots p and q, 1 <= p <= q."""
    if p < 1 or q < p:
        raise ValueError("need 1 <= p <= q")
    return math.sqrt(p / q)


def acf_empirical(traces, p: int, q: int) -> float:
    """Sample Pearson correlation of values[p] vs values[q] across traces."""
    traces = list(traces)
    if len(traces) < 500:
        raise ValueError("need >= 500 traces")
    tags = {t.model_tag for t in traces}
    if len(tags) != 1:
        raise ValueError("traces must share one model")
    if any(len(t) <= q for t in traces):
        raise ValueError("traces too short for the requested slot indices")
    x = np.array([t.values[p] for t in traces])
    y = np.array([t.values[q] for t in traces])
    if np.std(x) == 0 or np.std(y) == 0:
        raise ValueError("zero variance at the requested slots")
    return float(np.corrcoef(x, y)[0, 1])


def next_key_slot(current: int, eta: float) -> int:
    """Smallest slot q with sqrt(current/q) <= eta.

    eta = 1 means no decorrelation is required (q = current); the
    random-walk schedule grows geometrically by 1/eta^2.
    """
    if not (0.0 < eta <= 1.0):
        raise ValueError("eta must lie in (0, 1]")
    if current < 1:
        raise ValueError("slot index must be >= 1")
    q = max(current, int(math.ceil(current / (eta * eta))))
    # guard against float rounding on the ceiling
    while q > current and math.sqrt(current / (q - 1)) <= eta:
        q -= 1
    while math.sqrt(current / q) > eta:
        q += 1
    return q


def key_slot_schedule(eta: float, n_keys: int, first: int = 1) -> list[int]:
    """Slot indices of successive decorrelated keys under the random walk."""
    if n_keys < 1:
        raise ValueError("n_keys must be >= 1")
    slots = [first]
    for _ in range(n_keys - 1):
        slots.append(next_key_slot(slots[-1], eta))
    return slots


@dataclass(frozen=True)
class RateReport:
    model_tag: str
    entropy_rate: float  # bits/realization
    kgr_bound: float  # bits/s
    realization_interval: float  # seconds
    note: str = ""


def kgr_bound(model_tag: str, spec: OscillatorSpec, eta: float | None = None) -> RateReport:
    """Upper bound on the key generation rate, bits per second.

    M2b and M3 renew every slot, so the bound is entropy/T.  M2a renews
    only once its autocorrelation decays below eta; the first decorrelation
    interval (eta^-2 - 1 slots from slot 1) sets the reported rate.  M2a has
    no well-defined entropy rate of its own (the walk is non-stationary);
    the increment-process entropy is used as a stand-in and flagged.
    """
    t = spec.slot_duration
    if model_tag == "M3":
        h = entropy_rate_m3(spec.delta_hz)
        return RateReport("M3", h, h / t, t)
    if model_tag == "M2b":
        h = entropy_rate_m2b(spec.omega_c, spec.q2_sq, t)
        return RateReport("M2b", h, h / t, t)
    if model_tag == "M2a":
        if eta is None or not (0.0 < eta < 1.0):
            raise ValueError("M2a needs a decorrelation threshold eta in (0, 1)")
        interval = (next_key_slot(1, eta) - 1) * t
        h = entropy_rate_m2b(spec.omega_c, spec.q2_sq, t)
        return RateReport(
            "M2a",
            h,
            h / interval,
            interval,
            note="entropy per realization is the increment-process stand-in; "
            "the walk itself has no stationary entropy rate",
        )
    raise ValueError(f"no KGR bound defined for model {model_tag!r}")


def fractional_frequency(trace: CfoTrace, spec: OscillatorSpec) -> np.ndarray:
    """y_k = f(k)/f_c, the dimensionless frequency deviation."""
    return trace.values / spec.omega_c


def default_taus(n_samples: int, tau0: float) -> np.ndarray:
    """Octave-spaced averaging times up to a third of the record."""
    max_m = n_samples // 3
    ms = []
    m = 1
    while m <= max_m:
        ms.append(m)
        m *= 2
    return np.asarray(ms, dtype=float) * tau0


def allan_deviation(y: np.ndarray, tau0: float, taus) -> np.ndarray:
    """Overlapping Allan deviation of fractional-frequency samples.

    ``tau0`` is the sample spacing; each requested tau is rounded to an
    integer multiple m, and the record must hold at least 3 * max(m)
    samples.
    """
    y = np.asarray(y, dtype=np.float64)
    taus = np.asarray(taus, dtype=np.float64)
    if taus.size == 0:
        raise ValueError("need at least one tau")
    ms = np.maximum(1, np.round(taus / tau0).astype(int))
    if y.size < 3 * ms.max():
        raise ValueError(
            f"trace too short: need >= {3 * ms.max()} samples, got {y.size}"
        )
    csum = np.concatenate([[0.0], np.cumsum(y)])
    out = np.empty(ms.size)
    for i, m in enumerate(ms):
        # second difference of cluster means, all overlapping positions
        d = (csum[2 * m :] - 2.0 * csum[m:-m] + csum[: -2 * m]) / m
        out[i] = math.sqrt(0.5 * float(np.mean(d**2)))
    return out


def fit_loglog_slope(taus, sigmas) -> float:
    """Least-squares slope of log(sigma) vs log(tau), positive sigmas only."""
    taus = np.asarray(taus, dtype=float)
    sigmas = np.asarray(sigmas, dtype=float)
    mask = sigmas > 0
    if mask.sum() < 2:
        raise ValueError("need at least two positive points to fit a slope")
    return float(np.polyfit(np.log(taus[mask]), np.log(sigmas[mask]), 1)[0])
