"""Record types of the ride-recording schema.

Hierarchy: a ride has calibrated sensors and a map; it is divided into
scenes of fixed duration; each scene holds samples (timestamps at which all
sensors have valid measurements); each sample holds per-sensor sample data
and exactly one ego pose. Scenes carry hierarchical tags.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

SOURCES = ("simulation", "replay")
TAG_ORIGINS = ("manual", "auto")

# Minimal shipped tag taxonomy; stores may register more groups.
TAXONOMY: dict[str, set[str]] = {
    "dynamics": {"speed"},
    "sensors": {"modality"},
    "weather": {"condition"},
    "scenario": {"type"},
}


@dataclass(frozen=True)
class Ride:
    id: str
    start: float
    end: float
    vehicle_ref: str = ""
    rig_ref: str = ""
    source: str = "simulation"
    map_id: str | None = None

    def __post_init__(self):
        if self.source not in SOURCES:
            raise ValueError(f"ride {self.id!r}: source must be one of {SOURCES}")
        if not (math.isfinite(self.start) and math.isfinite(self.end)
                and self.end >= self.start):
            raise ValueError(f"ride {self.id!r}: need finite end >= start")


@dataclass(frozen=True)
class MapRecord:
    id: str
    name: str
    reference: str = ""


@dataclass(frozen=True)
class CalibratedSensor:
    id: str
    ride_id: str
    sensor_id: str
    extrinsic: tuple[float, float, float, float, float, float] = (0.0,) * 6
    intrinsic: tuple[float, ...] | None = None


@dataclass(frozen=True)
class Scene:
    id: str
    ride_id: str
    start: float
    end: float

    def __post_init__(self):
        if not self.end > self.start:
            raise ValueError(f"scene {self.id!r}: need end > start")


@dataclass(frozen=True)
class Sample:
    id: str
    scene_id: str
    timestamp: float


@dataclass(frozen=True)
class SampleData:
    id: str
    sample_id: str
    sensor_id: str
    timestamp: float
    payload_ref: str = ""


@dataclass(frozen=True)
class EgoPose:
    sample_id: str
    x: float
    y: float
    psi: float
    v_x: float
    v_y: float
    psi_dot: float

    def speed(self) -> float:
        return math.hypot(self.v_x, self.v_y)


@dataclass(frozen=True, order=True)
class Tag:
    category: str
    group: str
    name: str
    origin: str = "manual"

    def __post_init__(self):
        if self.origin not in TAG_ORIGINS:
            raise ValueError(f"tag origin must be one of {TAG_ORIGINS}")
        for part in (self.category, self.group, self.name):
            if not part:
                raise ValueError("tag parts must be non-empty")

    def key(self) -> tuple[str, str, str]:
        return (self.category, self.group, self.name)
