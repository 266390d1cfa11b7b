"""Credit-based shaper state and its evolution rule."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace


@dataclass(frozen=True)
class CbsState:
    """Shaper credit [bit] with its slopes [bit/s] and clamp bounds [bit].

    A queue may start transmitting only with credit >= 0. Credit refills at
    ``idle_slope`` while frames wait, drains at ``send_slope`` (negative)
    while transmitting, and relaxes toward zero while the queue sits empty.
    """

    credit: float = 0.0
    idle_slope: float = 0.0
    send_slope: float = 0.0
    hi_credit: float = 0.0
    lo_credit: float = 0.0

    def __post_init__(self):
        if self.idle_slope < 0.0:
            raise ValueError("idle_slope must be >= 0")
        if self.send_slope > 0.0:
            raise ValueError("send_slope must be <= 0")
        if self.lo_credit > 0.0 or self.hi_credit < 0.0:
            raise ValueError("need lo_credit <= 0 <= hi_credit")
        if not (self.lo_credit <= self.credit <= self.hi_credit):
            raise ValueError("credit outside [lo_credit, hi_credit]")


def cbs_advance(state: CbsState, interval: float, transmitting: bool,
                queue_nonempty: bool) -> CbsState:
    """Advance the credit over an interval with constant conditions.

    Transmitting drains at send_slope; waiting with queued frames gains at
    idle_slope; an empty idle queue has its credit pulled toward zero at
    idle_slope (from either sign). The result is clamped to the configured
    bounds, so the [lo_credit, hi_credit] invariant holds at every event
    boundary.
    """
    if interval < 0.0 or not math.isfinite(interval):
        raise ValueError(f"interval must be finite and >= 0, got {interval!r}")
    if interval == 0.0:
        return state
    c = state.credit
    if transmitting:
        c += state.send_slope * interval
    elif queue_nonempty:
        c += state.idle_slope * interval
    elif c > 0.0:
        c = max(0.0, c - state.idle_slope * interval)
    elif c < 0.0:
        c = min(0.0, c + state.idle_slope * interval)
    c = min(state.hi_credit, max(state.lo_credit, c))
    return replace(state, credit=c)
