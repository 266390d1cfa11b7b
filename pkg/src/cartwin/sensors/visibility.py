"""Point-visibility predicate for rig sensors.

A point is visible when, expressed in the sensor frame, it lies inside the
range band and the azimuth/elevation box of the sensing pattern (a full
annulus for rotating sensors with a 2*pi horizontal field), and the straight
ray from the sensor does not pass through the vehicle body prism.
"""

from __future__ import annotations

import math

import numpy as np

from .geometry import (
    polygon_is_convex,
    segment_blocked_by_prism,
    segments_blocked_by_convex_prism,
)
from .rig import Rig

FULL_CIRCLE = 2.0 * math.pi - 1e-9


def _in_pattern(spec, ps) -> bool:
    r = math.sqrt(ps[0] * ps[0] + ps[1] * ps[1] + ps[2] * ps[2])
    if not spec.min_range <= r <= spec.max_range:
        return False
    if spec.h_fov < FULL_CIRCLE:
        az = math.atan2(ps[1], ps[0])
        if abs(az) > 0.5 * spec.h_fov:
            return False
    el = math.atan2(ps[2], math.hypot(ps[0], ps[1]))
    return abs(el) <= 0.5 * spec.v_fov


def is_point_visible(rig: Rig, sensor_id: str, point) -> bool:
    """True iff the sensor sees the vehicle-frame point (x, y, z) [m]."""
    spec, _ = rig.get(sensor_id)
    R, t = rig.frame(sensor_id)
    p = np.asarray(point, dtype=float)
    ps = R.T @ (p - t)
    if not _in_pattern(spec, ps):
        return False
    fp = rig.footprint
    return not segment_blocked_by_prism(fp.polygon, fp.height, t, p)


def visible_mask(rig: Rig, sensor_id: str, points: np.ndarray) -> np.ndarray:
    """Vectorized point_visible over an (N, 3) array of vehicle-frame points.

    FOV and range tests run on the whole array; the body-occlusion test runs
    per candidate only, matching the scalar predicate exactly.
    """
    spec, _ = rig.get(sensor_id)
    R, t = rig.frame(sensor_id)
    ps = (points - t) @ R  # row-vector form of R.T @ (p - t)
    r = np.sqrt(np.einsum("ij,ij->i", ps, ps))
    mask = (r >= spec.min_range) & (r <= spec.max_range)
    if spec.h_fov < FULL_CIRCLE:
        az = np.arctan2(ps[:, 1], ps[:, 0])
        mask &= np.abs(az) <= 0.5 * spec.h_fov
    el = np.arctan2(ps[:, 2], np.hypot(ps[:, 0], ps[:, 1]))
    mask &= np.abs(el) <= 0.5 * spec.v_fov
    fp = rig.footprint
    idx = np.nonzero(mask)[0]
    if idx.size == 0:
        return mask
    if polygon_is_convex(fp.polygon):
        blocked = segments_blocked_by_convex_prism(fp.polygon, fp.height, t, points[idx])
        mask[idx[blocked]] = False
    else:
        for i in idx:
            if segment_blocked_by_prism(fp.polygon, fp.height, t, points[i]):
                mask[i] = False
    return mask
