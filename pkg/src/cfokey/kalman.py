"""Scalar Kalman filter tracking the random-walk CFO from noisy estimates.

The state transition is the identity (the walk has no drift term), so the
filter reduces to a single variance recursion and gain.  One filter per
Monte-Carlo trial; states are small values and never shared.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .estimator import CfoEstimate


@dataclass(frozen=True)
class KalmanState:
    estimate: float
    covariance: float
    process_var: float
    meas_var: float

    def __post_init__(self):
        if self.covariance < 0:
            raise ValueError("covariance must be >= 0")
        # process_var == 0 is tolerated so the degenerate-filter guard in
        # kf_step is reachable; generation paths always use > 0
        if self.process_var < 0:
            raise ValueError("process_var must be >= 0")
        if self.meas_var < 0:
            raise ValueError("meas_var must be >= 0")


def kf_init(first_measurement: CfoEstimate, process_var: float) -> KalmanState:
    """Start the filter on the first measurement with its own error variance."""
    return KalmanState(
        estimate=first_measurement.value,
        covariance=first_measurement.error_std**2,
        process_var=process_var,
        meas_var=first_measurement.error_std**2,
    )


def kf_step(state: KalmanState, measurement: CfoEstimate) -> KalmanState:
    """One predict/update cycle.

    Predict: P- = P + q (identity transition).  Update with gain
    K = P-/(P- + r); the gain always lies in [0, 1].
    """
    r = measurement.error_std**2
    p_prior = state.covariance + state.process_var
    if p_prior == 0.0 and r == 0.0:
        raise ValueError("degenerate filter: prior covariance and meas_var both zero")
    gain = p_prior / (p_prior + r)
    estimate = state.estimate + gain * (measurement.value - state.estimate)
    covariance = (1.0 - gain) * p_prior
    return KalmanState(estimate, covariance, state.process_var, r)


def filter_trace(measurements, process_var: float) -> np.ndarray:
    """Causally filter a measurement sequence; returns one value per input."""
    measurements = list(measurements)
    if not measurements:
        raise ValueError("need at least one measurement")
    state = kf_init(measurements[0], process_var)
    out = np.empty(len(measurements))
    out[0] = state.estimate
    for i, meas in enumerate(measurements[1:], start=1):
        state = kf_step(state, meas)
        out[i] = state.estimate
    return out


def steady_state_covariance(process_var: float, meas_var: float) -> float:
    """Posterior covariance fixed point P* = (P* + q) r / (P* + q + r).

    Closed form of the scalar Riccati recursion: the positive root of
    P^2 + q P - q r = 0.
    """
    q, r = process_var, meas_var
    return (-q + math.sqrt(q * q + 4.0 * q * r)) / 2.0


def convergence_slot(process_var: float, meas_var: float, rel_tol: float = 1e-3,
                     max_slots: int = 5000) -> int:
    """First slot index where |P_k - P_{k-1}| / P_k < rel_tol.

    The covariance recursion is measurement-independent, so the gate can be
    evaluated once per (q, r) pair and reused across trials.
    """
    q, r = process_var, meas_var
    p = r  # kf_init covariance
    for k in range(1, max_slots):
        p_prior = p + q
        p_next = p_prior * r / (p_prior + r) if (p_prior + r) > 0 else 0.0
        if p_next > 0 and abs(p_next - p) / p_next < rel_tol:
            return k
        p = p_next
    return max_slots
