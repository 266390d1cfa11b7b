"""Cascaded clock synchronization: grandmaster, boundary, transparent,
and ordinary clocks with drift, noise, and a PI offset servo."""

from .clock import ClockModel, read_clock, servo_update
from .messages import PtpMessageRecord, transparent_correction
from .sync import (
    SyncPath,
    SyncTopology,
    SyncTraces,
    run_sync_simulation,
    sync_exchange,
    vehicle_sync_topology,
)

__all__ = [
    "ClockModel", "PtpMessageRecord", "SyncPath", "SyncTopology",
    "SyncTraces", "read_clock", "run_sync_simulation", "servo_update",
    "sync_exchange", "transparent_correction", "vehicle_sync_topology",
]
