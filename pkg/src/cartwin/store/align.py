"""Sample alignment and scene segmentation."""

from __future__ import annotations

import bisect
import math


def pick_anchor(measurements: dict[str, list[float]]) -> str:
    """Slowest sensor (fewest measurements), ties broken by id."""
    return min(measurements, key=lambda k: (len(measurements[k]), k))


def align_with_assignments(measurements: dict[str, list[float]], tolerance: float,
                           anchor: str | None = None
                           ) -> list[tuple[float, dict[str, float]]]:
    """Sample timestamps plus the per-sensor measurement backing each.

    A sample is emitted at anchor timestamp t when every sensor has at least
    one not-yet-consumed measurement in [t - tolerance, t + tolerance]; the
    earliest such measurement per sensor is consumed, so each measurement
    backs at most one sample. Processing anchors in ascending order makes
    prefix consumption safe: a measurement skipped as too early can never
    match a later anchor. Input ordering is irrelevant (lists are sorted),
    and the anchor defaults to the slowest sensor.
    """
    if not measurements:
        raise ValueError("need at least one sensor")
    if not (tolerance > 0.0 and math.isfinite(tolerance)):
        raise ValueError("tolerance must be positive")
    sorted_ts = {k: sorted(v) for k, v in measurements.items()}
    if anchor is None:
        anchor = pick_anchor(sorted_ts)
    elif anchor not in sorted_ts:
        raise ValueError(f"anchor {anchor!r} is not a sensor")

    cursors = {k: 0 for k in sorted_ts}  # consumed prefix per sensor
    out = []
    for t in sorted_ts[anchor]:
        picks = {}
        ok = True
        for sensor, ts in sorted_ts.items():
            i = max(cursors[sensor], bisect.bisect_left(ts, t - tolerance))
            if i < len(ts) and ts[i] <= t + tolerance:
                picks[sensor] = i
            else:
                ok = False
                break
        if ok:
            assignment = {}
            for sensor, i in picks.items():
                cursors[sensor] = i + 1
                assignment[sensor] = sorted_ts[sensor][i]
            out.append((t, assignment))
    return out


def align_samples(measurements: dict[str, list[float]], tolerance: float,
                  anchor: str | None = None) -> list[float]:
    """Timestamps at which every sensor has a measurement within tolerance."""
    return [t for t, _ in align_with_assignments(measurements, tolerance, anchor)]


def segment_scenes(start: float, end: float, scene_duration: float) -> list[tuple[float, float]]:
    """Consecutive fixed-duration windows covering [start, end).

    The last scene may be shorter; bounds partition the ride exactly.
    """
    if not (scene_duration > 0.0 and math.isfinite(scene_duration)):
        raise ValueError("scene_duration must be positive")
    if not end > start:
        return []
    out = []
    k = 0
    while True:
        s = start + k * scene_duration
        if s >= end:
            break
        e = min(start + (k + 1) * scene_duration, end)
        out.append((s, e))
        if e >= end:
            break
        k += 1
    return out
