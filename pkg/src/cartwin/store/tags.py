"""Automatic scene tagging from recorded poses and the rig."""

from __future__ import annotations

from .records import EgoPose, Tag

KPH = 1.0 / 3.6

# Bucket edges: standstill below 0.5 m/s, low below 30 km/h, medium below
# 60 km/h, high above.
SPEED_BUCKETS = (
    (0.5, "standstill"),
    (30.0 * KPH, "low"),
    (60.0 * KPH, "medium"),
)


def speed_bucket(max_speed: float) -> str:
    for edge, name in SPEED_BUCKETS:
        if max_speed < edge:
            return name
    return "high"


def auto_tags(ego_poses: list[EgoPose], rig=None) -> list[Tag]:
    """Speed-bucket tag from the max ego speed plus per-modality presence tags."""
    tags = []
    if ego_poses:
        vmax = max(p.speed() for p in ego_poses)
        tags.append(Tag("dynamics", "speed", speed_bucket(vmax), origin="auto"))
    if rig is not None:
        for modality in rig.modalities():
            tags.append(Tag("sensors", "modality", modality, origin="auto"))
    return tags
