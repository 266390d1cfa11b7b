"""Clock models and the offset-discipline servo."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

ROLES = ("GM", "BC", "TC", "OC")
MAX_DRIFT = 1e-4

# Servo gains per sync interval; the pair has both roots of the closed loop
# inside the unit circle (|z| = sqrt(k_i)), so convergence is geometric.
DEFAULT_KP = 0.7
DEFAULT_KI = 0.3


@dataclass
class ClockModel:
    """One simulated clock.

    local(t) = t + offset + drift_rate * (t - epoch); ``offset`` is what the
    servo disciplines. Timestamping reads add Gaussian noise, reporting reads
    do not. Transparent clocks carry no clock state at all, they only forward
    and correct.
    """

    node_id: str
    role: str
    offset: float = 0.0
    drift_rate: float = 0.0
    timestamp_noise_sigma: float = 0.0
    epoch: float = 0.0
    servo_integral: float = 0.0
    last_correction: float = 0.0

    def __post_init__(self):
        if self.role not in ROLES:
            raise ValueError(f"clock {self.node_id!r}: unknown role {self.role!r}")
        if abs(self.drift_rate) > MAX_DRIFT:
            raise ValueError(
                f"clock {self.node_id!r}: |drift_rate| must be <= {MAX_DRIFT}"
            )
        if self.timestamp_noise_sigma < 0.0:
            raise ValueError(f"clock {self.node_id!r}: noise sigma must be >= 0")
        if self.role == "TC" and (self.offset or self.drift_rate
                                  or self.timestamp_noise_sigma):
            raise ValueError(
                f"clock {self.node_id!r}: a transparent clock has no clock state"
            )

    def current_offset(self, true_time: float) -> float:
        return self.offset + self.drift_rate * (true_time - self.epoch)


def read_clock(clock: ClockModel, true_time: float,
               rng: np.random.Generator | None = None) -> float:
    """Local clock reading at a true time.

    Passing ``rng`` marks a timestamping read, which adds the clock's
    Gaussian timestamp noise; reporting reads omit it.
    """
    local = true_time + clock.current_offset(true_time)
    if rng is not None and clock.timestamp_noise_sigma > 0.0:
        local += rng.normal(0.0, clock.timestamp_noise_sigma)
    return local


def servo_update(clock: ClockModel, offset_estimate: float,
                 k_p: float = DEFAULT_KP, k_i: float = DEFAULT_KI) -> ClockModel:
    """Proportional-integral offset correction toward the master.

    Only BC and OC clocks run a servo; the grandmaster is free-running and
    transparent clocks have nothing to discipline.
    """
    if clock.role not in ("BC", "OC"):
        raise ValueError(f"servo not applicable to role {clock.role!r}")
    if not math.isfinite(offset_estimate):
        raise ValueError("offset estimate must be finite")
    clock.servo_integral += offset_estimate
    correction = k_p * offset_estimate + k_i * clock.servo_integral
    clock.offset -= correction
    clock.last_correction = correction
    return clock
