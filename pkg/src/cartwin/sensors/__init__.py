"""Sensor-rig geometry: specs, poses, visibility, and BEV coverage."""

from .coverage import (
    BlindRegion,
    CoverageMap,
    Window,
    blind_spot_regions,
    brute_force_visibility_count,
    coverage_map,
    min_full_coverage_range,
)
from .flows import FlowSpec, sensor_flow_spec
from .rig import Footprint, Rig, SensorPose, SensorSpec, default_rig, load_rig, rig_from_dict
from .visibility import is_point_visible, visible_mask

__all__ = [
    "BlindRegion", "CoverageMap", "Footprint", "FlowSpec", "Rig",
    "SensorPose", "SensorSpec", "Window", "blind_spot_regions",
    "brute_force_visibility_count", "coverage_map", "default_rig",
    "is_point_visible", "load_rig", "min_full_coverage_range",
    "rig_from_dict", "sensor_flow_spec", "visible_mask",
]
