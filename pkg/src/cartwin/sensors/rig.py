"""Sensor suite description: specs, poses, footprint, and the default rig.

The default rig mirrors the research van's perception setup: ten cameras
(six mid-range for the 360 degree belt, two long-range front, two depth),
two rotating plus two solid-state lidars, and six radars. Each physical
radar alternates between a far and a near scanning pattern and is modeled
as two overlaid entries sharing one ``unit`` name. Mounting poses are
plausible defaults in the rear-axle frame; real installations override them
via the rig file.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ..config import ConfigError, angle_from, load_yaml, reject_unknown_keys
from .geometry import polygon_area, polygon_is_simple, rotation_rpy

MODALITIES = ("camera", "lidar", "radar", "microphone", "gnss")
TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class SensorPose:
    """Sensor mount in the vehicle frame (origin: middle of the rear axle)."""

    x: float = 0.0
    y: float = 0.0
    z: float = 0.0
    roll: float = 0.0
    pitch: float = 0.0
    yaw: float = 0.0

    def __post_init__(self):
        for name in ("x", "y", "z", "roll", "pitch", "yaw"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"SensorPose.{name} must be finite")

    def rotation(self) -> np.ndarray:
        return rotation_rpy(self.roll, self.pitch, self.yaw)

    def translation(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])


@dataclass(frozen=True)
class SensorSpec:
    """One sensing pattern: modality, field of view, range, and data rate.

    ``unit`` names the physical device; overlaid patterns (radar far/near)
    share a unit. ``payload_per_frame`` is the on-wire bytes per frame used
    for network flow derivation; overlay entries carry 0 so each physical
    device contributes one flow.
    """

    id: str
    modality: str
    h_fov: float
    v_fov: float
    max_range: float
    min_range: float = 0.0
    rate: float = 10.0
    payload_per_frame: int = 0
    unit: str = ""
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.modality not in MODALITIES:
            raise ValueError(f"unknown modality {self.modality!r} for sensor {self.id!r}")
        if not 0.0 < self.h_fov <= TWO_PI + 1e-12:
            raise ValueError(f"sensor {self.id!r}: h_fov must be in (0, 2*pi]")
        if not 0.0 < self.v_fov <= math.pi + 1e-12:
            raise ValueError(f"sensor {self.id!r}: v_fov must be in (0, pi]")
        if not self.max_range > 0.0:
            raise ValueError(f"sensor {self.id!r}: max_range must be positive")
        if not 0.0 <= self.min_range < self.max_range:
            raise ValueError(f"sensor {self.id!r}: need 0 <= min_range < max_range")
        if not self.rate > 0.0:
            raise ValueError(f"sensor {self.id!r}: rate must be positive")
        if self.payload_per_frame < 0:
            raise ValueError(f"sensor {self.id!r}: payload_per_frame must be >= 0")
        if not self.unit:
            object.__setattr__(self, "unit", self.id)


@dataclass(frozen=True)
class Footprint:
    """Vehicle outline polygon [m] extruded to ``height`` for occlusion."""

    polygon: np.ndarray
    height: float = 1.9

    def __post_init__(self):
        poly = np.asarray(self.polygon, dtype=float)
        if poly.ndim != 2 or poly.shape[1] != 2 or len(poly) < 3:
            raise ValueError("footprint polygon needs >= 3 (x, y) vertices")
        if not polygon_is_simple(poly):
            raise ValueError("footprint polygon must be simple (non-self-intersecting)")
        if polygon_area(poly) < 0:
            poly = poly[::-1].copy()
        object.__setattr__(self, "polygon", poly)
        if not self.height > 0.0:
            raise ValueError("footprint height must be positive")

    def area(self) -> float:
        return abs(polygon_area(self.polygon))


class Rig:
    """Immutable sensor rig: (spec, pose) pairs plus the vehicle footprint."""

    def __init__(self, sensors: list[tuple[SensorSpec, SensorPose]], footprint: Footprint):
        ids = [spec.id for spec, _ in sensors]
        dupes = sorted({i for i in ids if ids.count(i) > 1})
        if dupes:
            raise ValueError(f"duplicate sensor id(s): {dupes}")
        self._sensors = tuple(sensors)
        self._by_id = {spec.id: (spec, pose) for spec, pose in sensors}
        self.footprint = footprint
        # cache world->sensor transforms
        self._frames = {
            spec.id: (pose.rotation(), pose.translation()) for spec, pose in sensors
        }

    @property
    def sensors(self) -> tuple[tuple[SensorSpec, SensorPose], ...]:
        return self._sensors

    def ids(self) -> list[str]:
        return [spec.id for spec, _ in self._sensors]

    def get(self, sensor_id: str) -> tuple[SensorSpec, SensorPose]:
        try:
            return self._by_id[sensor_id]
        except KeyError:
            raise KeyError(f"unknown sensor id {sensor_id!r}") from None

    def frame(self, sensor_id: str) -> tuple[np.ndarray, np.ndarray]:
        return self._frames[sensor_id]

    def specs(self, modality: str | None = None) -> list[SensorSpec]:
        return [s for s, _ in self._sensors if modality is None or s.modality == modality]

    def units(self, modality: str | None = None) -> list[str]:
        seen = []
        for s, _ in self._sensors:
            if (modality is None or s.modality == modality) and s.unit not in seen:
                seen.append(s.unit)
        return seen

    def modalities(self) -> list[str]:
        out = []
        for s, _ in self._sensors:
            if s.modality not in out:
                out.append(s.modality)
        return out


_SENSOR_KEYS = {"id", "modality", "unit", "pose", "min_range", "max_range",
                "rate_hz", "payload_per_frame", "extra",
                "h_fov_rad", "h_fov_deg", "v_fov_rad", "v_fov_deg"}
_POSE_KEYS = {"x", "y", "z", "roll_rad", "roll_deg", "pitch_rad", "pitch_deg",
              "yaw_rad", "yaw_deg"}


def _pose_from_dict(raw: dict, context: str) -> SensorPose:
    reject_unknown_keys(raw, _POSE_KEYS, context=context)
    return SensorPose(
        x=float(raw.get("x", 0.0)),
        y=float(raw.get("y", 0.0)),
        z=float(raw.get("z", 0.0)),
        roll=angle_from(raw, "roll", 0.0, context=context),
        pitch=angle_from(raw, "pitch", 0.0, context=context),
        yaw=angle_from(raw, "yaw", 0.0, context=context),
    )


def rig_from_dict(doc: dict) -> Rig:
    """Validate and build a rig from a parsed document."""
    reject_unknown_keys(doc, {"footprint", "sensors"}, context="rig document")
    fp_raw = doc.get("footprint", {})
    reject_unknown_keys(fp_raw, {"polygon", "height"}, context="footprint")
    polygon = fp_raw.get("polygon", DEFAULT_FOOTPRINT_POLYGON)
    try:
        footprint = Footprint(polygon=np.asarray(polygon, dtype=float),
                              height=float(fp_raw.get("height", 1.9)))
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc

    sensors = []
    for idx, raw in enumerate(doc.get("sensors", [])):
        context = f"sensor #{idx}"
        reject_unknown_keys(raw, _SENSOR_KEYS, context=context)
        for req in ("id", "modality", "max_range"):
            if req not in raw:
                raise ConfigError(f"{context}: missing required key {req!r}")
        context = f"sensor {raw['id']!r}"
        try:
            spec = SensorSpec(
                id=str(raw["id"]),
                modality=str(raw["modality"]),
                unit=str(raw.get("unit", "")),
                h_fov=angle_from(raw, "h_fov", context=context),
                v_fov=angle_from(raw, "v_fov", context=context),
                max_range=float(raw["max_range"]),
                min_range=float(raw.get("min_range", 0.0)),
                rate=float(raw.get("rate_hz", 10.0)),
                payload_per_frame=int(raw.get("payload_per_frame", 0)),
                extra=dict(raw.get("extra", {})),
            )
            pose = _pose_from_dict(raw.get("pose", {}), context=context)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        sensors.append((spec, pose))
    try:
        return Rig(sensors, footprint)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def load_rig(path: str | Path) -> Rig:
    """Load and validate a rig file (YAML; angles accept _deg or _rad keys)."""
    return rig_from_dict(load_yaml(path))


# Rectangle around the van body, rear axle at the origin, x forward.
DEFAULT_FOOTPRINT_POLYGON = [[-1.0, -0.97], [4.0, -0.97], [4.0, 0.97], [-1.0, 0.97]]


def _cam(id_, x, y, yaw_deg, h_deg, v_deg, rng, payload, rate=40.0):
    return {
        "id": id_, "modality": "camera",
        "pose": {"x": x, "y": y, "z": 2.05, "yaw_deg": yaw_deg},
        "h_fov_deg": h_deg, "v_fov_deg": v_deg,
        "min_range": 0.5, "max_range": rng,
        "rate_hz": rate, "payload_per_frame": payload,
    }


def _radar(unit, x, y, yaw_deg, near_range=70.0):
    far = {
        "id": f"{unit}_far", "unit": unit, "modality": "radar",
        "pose": {"x": x, "y": y, "z": 0.5, "yaw_deg": yaw_deg},
        "h_fov_deg": 18.0, "v_fov_deg": 28.0,
        "min_range": 0.2, "max_range": 250.0,
        "rate_hz": 20.0, "payload_per_frame": 56250,
        "extra": {"pattern": "far"},
    }
    near = {
        "id": f"{unit}_near", "unit": unit, "modality": "radar",
        "pose": {"x": x, "y": y, "z": 0.5, "yaw_deg": yaw_deg},
        "h_fov_deg": 120.0, "v_fov_deg": 28.0,
        "min_range": 0.2, "max_range": near_range,
        "rate_hz": 20.0, "payload_per_frame": 0,
        "extra": {"pattern": "near"},
    }
    return [far, near]


def default_rig_dict() -> dict:
    """The shipped rig as a plain document (what load_rig would consume)."""
    sensors = [
        # 360-degree mid-range camera belt: three front, three rear.
        _cam("cam_front_center", 3.90, 0.00, 0.0, 84.9, 59.7, 100.0, 691200),
        _cam("cam_front_left", 3.80, 0.80, 65.0, 84.9, 59.7, 100.0, 691200),
        _cam("cam_front_right", 3.80, -0.80, -65.0, 84.9, 59.7, 100.0, 691200),
        _cam("cam_rear_center", -0.90, 0.00, 180.0, 99.5, 73.1, 100.0, 691200),
        _cam("cam_rear_left", -0.80, 0.80, 115.0, 99.5, 73.1, 100.0, 691200),
        _cam("cam_rear_right", -0.80, -0.80, -115.0, 99.5, 73.1, 100.0, 691200),
        # Long-range stereo pair at the front.
        _cam("cam_long_left", 3.95, 0.30, 0.0, 38.6, 24.8, 250.0, 691200),
        _cam("cam_long_right", 3.95, -0.30, 0.0, 38.6, 24.8, 250.0, 691200),
        # Depth cameras on the roof-rack sides.
        _cam("cam_depth_left", 3.60, 0.90, 90.0, 87.0, 58.0, 60.0, 1843200, rate=30.0),
        _cam("cam_depth_right", 3.60, -0.90, -90.0, 87.0, 58.0, 60.0, 1843200, rate=30.0),
        # Rotating lidars at the front roof corners.
        {"id": "lidar_rot_left", "modality": "lidar",
         "pose": {"x": 3.60, "y": 0.85, "z": 2.10},
         "h_fov_deg": 360.0, "v_fov_deg": 45.0,
         "min_range": 0.3, "max_range": 45.0,
         "rate_hz": 10.0, "payload_per_frame": 1572864},
        {"id": "lidar_rot_right", "modality": "lidar",
         "pose": {"x": 3.60, "y": -0.85, "z": 2.10},
         "h_fov_deg": 360.0, "v_fov_deg": 45.0,
         "min_range": 0.3, "max_range": 45.0,
         "rate_hz": 10.0, "payload_per_frame": 1572864},
        # Solid-state long-range lidars at the front and rear roof centers.
        {"id": "lidar_ss_front", "modality": "lidar",
         "pose": {"x": 3.95, "y": 0.0, "z": 2.10, "yaw_deg": 0.0},
         "h_fov_deg": 120.0, "v_fov_deg": 25.0,
         "min_range": 0.5, "max_range": 250.0,
         "rate_hz": 10.0, "payload_per_frame": 900000},
        {"id": "lidar_ss_rear", "modality": "lidar",
         "pose": {"x": -0.95, "y": 0.0, "z": 2.10, "yaw_deg": 180.0},
         "h_fov_deg": 120.0, "v_fov_deg": 25.0,
         "min_range": 0.5, "max_range": 250.0,
         "rate_hz": 10.0, "payload_per_frame": 900000},
    ]
    # Six radars around the bumpers, each a far + near pattern pair.
    sensors += _radar("radar_front_center", 4.01, 0.00, 0.0)
    sensors += _radar("radar_front_left", 4.005, 0.90, 45.0)
    sensors += _radar("radar_front_right", 4.005, -0.90, -45.0)
    sensors += _radar("radar_rear_left", -1.005, 0.90, 135.0)
    sensors += _radar("radar_rear_right", -1.005, -0.90, -135.0)
    sensors += _radar("radar_rear_center", -1.01, 0.00, 180.0)
    return {
        "footprint": {"polygon": DEFAULT_FOOTPRINT_POLYGON, "height": 1.9},
        "sensors": sensors,
    }


def default_rig() -> Rig:
    return rig_from_dict(default_rig_dict())
