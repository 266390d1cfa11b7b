"""Relational ride-recording store with tagging and alignment."""

from .align import align_samples, align_with_assignments, pick_anchor, segment_scenes
from .query import TagExprError, eval_tag_expr, parse_tag_expr
from .records import (
    CalibratedSensor,
    EgoPose,
    MapRecord,
    Ride,
    Sample,
    SampleData,
    Scene,
    Tag,
)
from .store import IntegrityReport, RideStore, Violation
from .tags import auto_tags, speed_bucket

__all__ = [
    "CalibratedSensor", "EgoPose", "IntegrityReport", "MapRecord", "Ride",
    "RideStore", "Sample", "SampleData", "Scene", "Tag", "TagExprError",
    "Violation", "align_samples", "align_with_assignments", "auto_tags", "eval_tag_expr",
    "parse_tag_expr", "pick_anchor", "segment_scenes", "speed_bucket",
]
