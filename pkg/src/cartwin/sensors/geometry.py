"""Planar polygon tests and rigid-transform helpers for the sensor rig.

The vehicle frame has x forward, y left, z up, origin at the middle of the
rear axle. Sensor orientations are roll/pitch/yaw applied as
R = Rz(yaw) @ Ry(pitch) @ Rx(roll); the sensor boresight is its +x axis.
"""

from __future__ import annotations

import math

import numpy as np


def rotation_rpy(roll: float, pitch: float, yaw: float) -> np.ndarray:
    cr, sr = math.cos(roll), math.sin(roll)
    cp, sp = math.cos(pitch), math.sin(pitch)
    cy, sy = math.cos(yaw), math.sin(yaw)
    return np.array([
        [cy * cp, cy * sp * sr - sy * cr, cy * sp * cr + sy * sr],
        [sy * cp, sy * sp * sr + cy * cr, sy * sp * cr - cy * sr],
        [-sp, cp * sr, cp * cr],
    ])


def polygon_area(poly: np.ndarray) -> float:
    """Signed shoelace area; positive for counter-clockwise vertex order."""
    x, y = poly[:, 0], poly[:, 1]
    return 0.5 * float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))


def _segments_properly_intersect(p, q, a, b) -> bool:
    def orient(o, u, v):
        return (u[0] - o[0]) * (v[1] - o[1]) - (u[1] - o[1]) * (v[0] - o[0])

    d1 = orient(a, b, p)
    d2 = orient(a, b, q)
    d3 = orient(p, q, a)
    d4 = orient(p, q, b)
    return ((d1 > 0) != (d2 > 0)) and ((d3 > 0) != (d4 > 0))


def polygon_is_simple(poly: np.ndarray) -> bool:
    """True if no two non-adjacent edges properly intersect."""
    n = len(poly)
    if n < 3:
        return False
    edges = [(poly[i], poly[(i + 1) % n]) for i in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            if j == i or (j + 1) % n == i or (i + 1) % n == j:
                continue
            if _segments_properly_intersect(*edges[i], *edges[j]):
                return False
    return True


def point_in_polygon(poly: np.ndarray, x: float, y: float) -> bool:
    """Even-odd rule with half-open edges; boundary points are arbitrary
    but deterministic."""
    inside = False
    n = len(poly)
    x1, y1 = poly[-1]
    for i in range(n):
        x2, y2 = poly[i]
        if (y1 > y) != (y2 > y):
            xi = x1 + (y - y1) * (x2 - x1) / (y2 - y1)
            if x < xi:
                inside = not inside
        x1, y1 = x2, y2
    return inside


def points_in_polygon(poly: np.ndarray, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
    """Vectorized even-odd test matching point_in_polygon."""
    inside = np.zeros(xs.shape, dtype=bool)
    n = len(poly)
    x1, y1 = poly[-1]
    for i in range(n):
        x2, y2 = poly[i]
        crosses = (y1 > ys) != (y2 > ys)
        if np.any(crosses):
            xi = x1 + (ys[crosses] - y1) * (x2 - x1) / (y2 - y1)
            hit = np.zeros(xs.shape, dtype=bool)
            hit[crosses] = xs[crosses] < xi
            inside ^= hit
        x1, y1 = x2, y2
    return inside


def segment_inside_intervals(poly: np.ndarray, p0, p1) -> list[tuple[float, float]]:
    """Parameter intervals of segment p0->p1 lying inside the polygon.

    Crossing parameters are found per edge; each interval between
    consecutive crossings is classified by its midpoint.
    """
    dx, dy = p1[0] - p0[0], p1[1] - p0[1]
    ts = [0.0, 1.0]
    n = len(poly)
    x1, y1 = poly[-1]
    for i in range(n):
        x2, y2 = poly[i]
        ex, ey = x2 - x1, y2 - y1
        denom = dx * ey - dy * ex
        if denom != 0.0:
            t = ((x1 - p0[0]) * ey - (y1 - p0[1]) * ex) / denom
            u = ((x1 - p0[0]) * dy - (y1 - p0[1]) * dx) / denom
            if 0.0 < t < 1.0 and 0.0 <= u <= 1.0:
                ts.append(t)
        x1, y1 = x2, y2
    ts = sorted(set(ts))
    out = []
    for a, b in zip(ts[:-1], ts[1:]):
        if b - a < 1e-12:
            continue
        mid = 0.5 * (a + b)
        if point_in_polygon(poly, p0[0] + mid * dx, p0[1] + mid * dy):
            out.append((a, b))
    return out


def polygon_is_convex(poly: np.ndarray) -> bool:
    """True if all turns share one orientation (degenerate turns allowed)."""
    n = len(poly)
    sign = 0
    for i in range(n):
        a, b, c = poly[i], poly[(i + 1) % n], poly[(i + 2) % n]
        cross = (b[0] - a[0]) * (c[1] - b[1]) - (b[1] - a[1]) * (c[0] - b[0])
        if cross > 1e-12:
            if sign < 0:
                return False
            sign = 1
        elif cross < -1e-12:
            if sign > 0:
                return False
            sign = -1
    return True


def segments_blocked_by_convex_prism(poly: np.ndarray, height: float,
                                     p0_3d, pts: np.ndarray) -> np.ndarray:
    """Vectorized prism-occlusion test from one origin to many endpoints.

    Cyrus-Beck clipping against the convex polygon (CCW order assumed);
    semantics match segment_blocked_by_prism.
    """
    d = pts[:, :2] - p0_3d[:2]
    n_pts = len(pts)
    t_enter = np.zeros(n_pts)
    t_exit = np.ones(n_pts)
    feasible = np.ones(n_pts, dtype=bool)
    n = len(poly)
    for i in range(n):
        a = poly[i]
        b = poly[(i + 1) % n]
        ex, ey = b[0] - a[0], b[1] - a[1]
        nx, ny = -ey, ex  # inward normal for CCW order
        s = (p0_3d[0] - a[0]) * nx + (p0_3d[1] - a[1]) * ny
        denom = d[:, 0] * nx + d[:, 1] * ny
        with np.errstate(divide="ignore", invalid="ignore"):
            tb = -s / denom
        entering = denom > 0.0
        exiting = denom < 0.0
        parallel = denom == 0.0
        t_enter = np.where(entering, np.maximum(t_enter, tb), t_enter)
        t_exit = np.where(exiting, np.minimum(t_exit, tb), t_exit)
        feasible &= ~(parallel & (s < 0.0))
    length = t_exit - t_enter
    inside = feasible & (length > 1e-12)
    z0 = p0_3d[2]
    dz = pts[:, 2] - z0
    z_a = z0 + t_enter * dz
    z_b = z0 + t_exit * dz
    return inside & (np.minimum(z_a, z_b) < height - 1e-12)


def segment_blocked_by_prism(poly: np.ndarray, height: float, p0_3d, p1_3d) -> bool:
    """True if the 3D segment dips below ``height`` while over the polygon.

    This is the body-occlusion test: the footprint is treated as a solid
    prism from the ground to ``height``.
    """
    intervals = segment_inside_intervals(poly, p0_3d[:2], p1_3d[:2])
    if not intervals:
        return False
    z0, z1 = p0_3d[2], p1_3d[2]
    for a, b in intervals:
        za = z0 + a * (z1 - z0)
        zb = z0 + b * (z1 - z0)
        if min(za, zb) < height - 1e-12:
            return True
    return False
