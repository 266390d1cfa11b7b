"""Data-stream figures implied by a sensor's rate and frame payload."""

from __future__ import annotations

from dataclasses import dataclass

from .rig import SensorSpec


@dataclass(frozen=True)
class FlowSpec:
    """Periodic stream emitted by one sensor."""

    bitrate_bps: float
    period_s: float
    frame_bytes: int


def sensor_flow_spec(spec: SensorSpec) -> FlowSpec:
    """Bitrate, frame period, and frame size of a sensor's output stream."""
    return FlowSpec(
        bitrate_bps=spec.payload_per_frame * 8.0 * spec.rate,
        period_s=1.0 / spec.rate,
        frame_bytes=spec.payload_per_frame,
    )
