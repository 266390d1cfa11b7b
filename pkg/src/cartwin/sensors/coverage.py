"""Bird's-eye-view coverage maps, blind-spot regions, and coverage radii."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .geometry import points_in_polygon
from .rig import Rig
from .visibility import is_point_visible, visible_mask


@dataclass(frozen=True)
class Window:
    """Axis-aligned BEV extents [m]."""

    x_min: float
    x_max: float
    y_min: float
    y_max: float

    def __post_init__(self):
        if not (self.x_max > self.x_min and self.y_max > self.y_min):
            raise ValueError("window extents are degenerate")

    @classmethod
    def square(cls, side: float) -> "Window":
        h = side / 2.0
        return cls(-h, h, -h, h)


class CoverageMap:
    """Per-modality sensor counts on a regular BEV grid.

    Cells whose center lies inside the vehicle footprint are masked out and
    tracked separately so covered + blind + footprint partitions the window
    cell-exactly.
    """

    def __init__(self, window: Window, cell: float, query_height: float,
                 counts: dict[str, np.ndarray], footprint_mask: np.ndarray,
                 spec_counts: dict[str, int]):
        self.window = window
        self.cell = cell
        self.query_height = query_height
        self.counts = counts
        self.footprint_mask = footprint_mask
        self.spec_counts = spec_counts

    @property
    def shape(self) -> tuple[int, int]:
        return self.footprint_mask.shape

    def cell_centers(self) -> tuple[np.ndarray, np.ndarray]:
        ny, nx = self.shape
        xs = self.window.x_min + (np.arange(nx) + 0.5) * self.cell
        ys = self.window.y_min + (np.arange(ny) + 0.5) * self.cell
        return xs, ys

    def cell_index(self, x: float, y: float) -> tuple[int, int] | None:
        ny, nx = self.shape
        ix = int(math.floor((x - self.window.x_min) / self.cell))
        iy = int(math.floor((y - self.window.y_min) / self.cell))
        if 0 <= ix < nx and 0 <= iy < ny:
            return iy, ix
        return None

    def total(self, modalities=None) -> np.ndarray:
        """Summed counts over the given modalities (default: all)."""
        keys = list(self.counts) if modalities is None else list(modalities)
        out = np.zeros(self.shape, dtype=np.int64)
        for k in keys:
            if k in self.counts:
                out += self.counts[k]
        return out

    def to_csv(self, modalities=None) -> str:
        """Grid of counts, one row per y index (ascending), -1 marks footprint."""
        total = self.total(modalities).astype(np.int64)
        total[self.footprint_mask] = -1
        lines = [
            f"# window,{self.window.x_min:.10g},{self.window.x_max:.10g},"
            f"{self.window.y_min:.10g},{self.window.y_max:.10g}",
            f"# cell,{self.cell:.10g}",
            f"# query_height,{self.query_height:.10g}",
        ]
        for row in total:
            lines.append(",".join(str(int(v)) for v in row))
        return "\n".join(lines) + "\n"

    def to_pgm(self, modalities=None) -> bytes:
        """Plain-text PGM image for visual diffing (footprint rendered dark)."""
        total = self.total(modalities)
        peak = max(1, int(total.max()))
        maxval = peak + 1
        img = (total + 1).astype(np.int64)
        img[self.footprint_mask] = 0
        ny, nx = img.shape
        rows = [" ".join(str(int(v)) for v in img[iy]) for iy in range(ny - 1, -1, -1)]
        head = f"P2\n{nx} {ny}\n{maxval}\n"
        return (head + "\n".join(rows) + "\n").encode()


def coverage_map(rig: Rig, window: Window, cell: float,
                 query_height: float = 1.0) -> CoverageMap:
    """Evaluate per-sensor visibility at every cell center of the window."""
    if not (cell > 0.0 and math.isfinite(cell)):
        raise ValueError("cell size must be positive")
    nx = int(round((window.x_max - window.x_min) / cell))
    ny = int(round((window.y_max - window.y_min) / cell))
    if nx < 1 or ny < 1:
        raise ValueError("window is degenerate for the given cell size")
    xs = window.x_min + (np.arange(nx) + 0.5) * cell
    ys = window.y_min + (np.arange(ny) + 0.5) * cell
    gx, gy = np.meshgrid(xs, ys)
    pts = np.column_stack([gx.ravel(), gy.ravel(),
                           np.full(gx.size, float(query_height))])

    modalities = rig.modalities()
    counts = {m: np.zeros((ny, nx), dtype=np.uint16) for m in modalities}
    spec_counts = {m: len(rig.specs(m)) for m in modalities}
    for spec, _ in rig.sensors:
        mask = visible_mask(rig, spec.id, pts).reshape(ny, nx)
        counts[spec.modality] += mask.astype(np.uint16)

    foot = points_in_polygon(rig.footprint.polygon, gx.ravel(), gy.ravel())
    return CoverageMap(window, cell, query_height, counts,
                       foot.reshape(ny, nx), spec_counts)


@dataclass(frozen=True)
class BlindRegion:
    """One connected zero-coverage region (4-connected cells)."""

    cells: int
    area_m2: float
    label: int


def blind_spot_regions(rig: Rig, modality_set, window: Window, cell: float,
                       query_height: float = 1.0,
                       cov: CoverageMap | None = None) -> list[BlindRegion]:
    """Connected components of zero-coverage cells outside the footprint."""
    if cov is None:
        cov = coverage_map(rig, window, cell, query_height)
    modality_set = list(modality_set)
    blind = (cov.total(modality_set) == 0) & ~cov.footprint_mask
    structure = np.array([[0, 1, 0], [1, 1, 1], [0, 1, 0]])
    labels, n = ndimage.label(blind, structure=structure)
    regions = []
    for lab in range(1, n + 1):
        cells = int(np.sum(labels == lab))
        regions.append(BlindRegion(cells=cells, area_m2=cells * cell * cell, label=lab))
    regions.sort(key=lambda r: (-r.cells, r.label))
    return regions


def min_full_coverage_range(rig: Rig, modality: str, *,
                            query_height: float = 1.0,
                            az_step_deg: float = 0.1,
                            r_max: float = 300.0,
                            tol: float = 1e-6) -> float | None:
    """Smallest radius at which every bearing from the origin is covered.

    Bearings are sampled densely (default 0.1 degree); the radius is located
    with probe points at every sensor's min_range plus a geometric ladder,
    then refined by bisection. Returns None when no radius up to ``r_max``
    achieves gap-free coverage.
    """
    specs = rig.specs(modality)
    if not specs:
        raise ValueError(f"rig has no sensors of modality {modality!r}")
    n_az = int(round(360.0 / az_step_deg))
    theta = np.arange(n_az) * (2.0 * math.pi / n_az)
    cos_t, sin_t = np.cos(theta), np.sin(theta)

    def full_cover(r: float) -> bool:
        pts = np.column_stack([r * cos_t, r * sin_t,
                               np.full(n_az, float(query_height))])
        covered = np.zeros(n_az, dtype=bool)
        for spec in specs:
            covered |= visible_mask(rig, spec.id, pts)
            if covered.all():
                return True
        return bool(covered.all())

    min_ranges = sorted({s.min_range for s in specs if s.min_range > 0.0})
    ladder = sorted(set(min_ranges)
                    | {0.25 * 2.0 ** k for k in range(0, 12) if 0.25 * 2.0 ** k <= r_max}
                    | {r_max})
    r_true = None
    r_false = 0.0
    for r in ladder:
        if full_cover(r):
            r_true = r
            break
        r_false = r
    if r_true is None:
        return None
    # Exact-boundary shortcut: a sensor's min_range is often the answer.
    for c in min_ranges:
        if r_false < c <= r_true and full_cover(c) and not full_cover(c * (1.0 - 1e-9)):
            return c
    lo, hi = r_false, r_true
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if full_cover(mid):
            hi = mid
        else:
            lo = mid
    return hi


def brute_force_visibility_count(rig: Rig, point, modalities=None) -> int:
    """Independent per-point recount used as the coverage oracle."""
    n = 0
    for spec, _ in rig.sensors:
        if modalities is not None and spec.modality not in modalities:
            continue
        if is_point_visible(rig, spec.id, point):
            n += 1
    return n
