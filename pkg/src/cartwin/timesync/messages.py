"""Sync message records and the transparent-clock correction."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

KINDS = ("Sync", "FollowUp", "DelayReq", "DelayResp")


@dataclass(frozen=True)
class PtpMessageRecord:
    """Timestamps of one message leg, all in seconds.

    ``correction_field`` accumulates the residence time added by every
    transparent clock the message traversed.
    """

    kind: str
    t_originate: float = 0.0
    t_receive: float = 0.0
    t_transmit: float = 0.0
    correction_field: float = 0.0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown message kind {self.kind!r}")
        for name in ("t_originate", "t_receive", "t_transmit", "correction_field"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"PtpMessageRecord.{name} must be finite")
        if self.correction_field < 0.0:
            raise ValueError("correction_field must be >= 0")


def transparent_correction(message: PtpMessageRecord, residence: float) -> PtpMessageRecord:
    """Add a switch residence time to the correction field, exactly.

    Every other field is untouched; corrections are additive along a chain
    of transparent clocks.
    """
    if residence < 0.0 or not math.isfinite(residence):
        raise ValueError(f"residence must be finite and >= 0, got {residence!r}")
    return replace(message, correction_field=message.correction_field + residence)
