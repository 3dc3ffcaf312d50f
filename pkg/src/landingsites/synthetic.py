"""Seeded synthetic DSM/DTM pairs with automatic ground truth.

Bare earth is a diamond-square fractal; vegetation is a set of elliptical
canopy blobs of constant height stamped on top of it.  Ground truth marks
gently sloping bare ground outside the canopy, restricted to regions large
enough to land on.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .exceptions import InvalidParameter
from .grid import BitMask, DemGrid, check_aligned
from .labeling import area_filter
from .terrain import slope_degrees, threshold_flat
from .validation import check_positive, min_pixels_for_area

MIN_SIZE = 9


@dataclass(frozen=True)
class SynthParams:
    """Generator settings.

    ``blob_radius_range`` bounds the canopy ellipse semi-axes in pixels and
    ``base_elevation`` offsets the whole terrain.
    """

    seed: int = 0
    size: int = 129
    cellsize: float = 1.2
    relief_amplitude: float = 80.0
    roughness: float = 0.55
    vegetation_density: float = 0.1
    vegetation_height_range: tuple = (2.0, 15.0)
    gt_slope_thresh: float = 5.0
    gt_min_area: float = 25.0
    blob_radius_range: tuple = (2.0, 6.0)
    base_elevation: float = 100.0

    def __post_init__(self):
        if isinstance(self.seed, bool) or int(self.seed) != self.seed \
                or not 0 <= self.seed < 2**64:
            raise InvalidParameter(f"seed must be an unsigned 64-bit integer, got {self.seed!r}")
        if int(self.size) != self.size or self.size < MIN_SIZE:
            raise InvalidParameter(f"size must be an integer >= {MIN_SIZE}, got {self.size!r}")
        check_positive("cellsize", self.cellsize)
        if not (self.relief_amplitude >= 0 and math.isfinite(self.relief_amplitude)):
            raise InvalidParameter(f"relief_amplitude must be >= 0, got {self.relief_amplitude}")
        if not 0 < self.roughness < 1:
            raise InvalidParameter(f"roughness must lie in (0, 1), got {self.roughness}")
        if not 0 <= self.vegetation_density <= 1:
            raise InvalidParameter(
                f"vegetation_density must lie in [0, 1], got {self.vegetation_density}")
        lo, hi = self.vegetation_height_range
        if not 0 < lo <= hi:
            raise InvalidParameter(f"bad vegetation_height_range {self.vegetation_height_range}")
        rlo, rhi = self.blob_radius_range
        if not 0 < rlo <= rhi:
            raise InvalidParameter(f"bad blob_radius_range {self.blob_radius_range}")
        if not 0 < self.gt_slope_thresh < 90:
            raise InvalidParameter(f"gt_slope_thresh must lie in (0, 90), got {self.gt_slope_thresh}")
        check_positive("gt_min_area", self.gt_min_area)

    def expected_blob_area(self):
        rlo, rhi = self.blob_radius_range
        mean_r = 0.5 * (rlo + rhi)
        return math.pi * mean_r * mean_r

    def blob_count(self):
        return int(round(self.vegetation_density * self.size * self.size
                         / self.expected_blob_area()))


class SynthResult(NamedTuple):
    dtm: DemGrid
    dsm: DemGrid
    gt: BitMask


def diamond_square(rng, levels, amplitude, roughness):
    """A ``(2**levels + 1)`` square fractal heightmap centred on zero.

    Corner heights and every midpoint displacement are uniform in
    ``[-amp, amp]``; ``amp`` starts at ``amplitude / 2`` and is multiplied by
    ``roughness`` after each square+diamond pass.  Draws are taken from
    ``rng`` in a fixed order (corners, then per pass: square centres,
    row-edge midpoints, column-edge midpoints, each in raster order).
    """
    n = 2**levels + 1
    h = np.zeros((n, n), dtype=np.float64)
    amp = 0.5 * amplitude
    h[::n - 1, ::n - 1] = rng.uniform(-amp, amp, size=(2, 2))
    step = n - 1
    while step > 1:
        half = step // 2
        amp *= roughness
        # square step
        corners = (h[0:-1:step, 0:-1:step] + h[0:-1:step, step::step]
                   + h[step::step, 0:-1:step] + h[step::step, step::step])
        h[half::step, half::step] = 0.25 * corners + rng.uniform(-amp, amp, size=corners.shape)

        # diamond step; points off the grid are left out of the average
        p = np.pad(h, half, mode="constant", constant_values=np.nan)
        for r0, c0 in ((0, half), (half, 0)):
            rows = slice(r0 + half, n + half, step)
            cols = slice(c0 + half, n + half, step)
            rr = np.arange(n)[r0::step] + half
            cc = np.arange(n)[c0::step] + half
            nb = np.stack([p[rr - half][:, cc], p[rr + half][:, cc],
                           p[rr][:, cc - half], p[rr][:, cc + half]])
            mean = np.nansum(nb, axis=0) / np.sum(~np.isnan(nb), axis=0)
            p[rows, cols] = mean + rng.uniform(-amp, amp, size=mean.shape)
        h = p[half:half + n, half:half + n].copy()
        step = half
    return h


def _stamp_vegetation(rng, shape, count, radius_range, height_range):
    canopy = np.zeros(shape, dtype=np.float64)
    if count == 0:
        return canopy
    nrows, ncols = shape
    centre_r = rng.uniform(0, nrows, size=count)
    centre_c = rng.uniform(0, ncols, size=count)
    semi_a = rng.uniform(*radius_range, size=count)
    semi_b = rng.uniform(*radius_range, size=count)
    theta = rng.uniform(0, math.pi, size=count)
    heights = rng.uniform(*height_range, size=count)
    for k in range(count):
        reach = max(semi_a[k], semi_b[k])
        r_lo = max(0, int(math.floor(centre_r[k] - reach)))
        r_hi = min(nrows, int(math.ceil(centre_r[k] + reach)) + 1)
        c_lo = max(0, int(math.floor(centre_c[k] - reach)))
        c_hi = min(ncols, int(math.ceil(centre_c[k] + reach)) + 1)
        # pixel centres sit at integer + 0.5
        dr = (np.arange(r_lo, r_hi) + 0.5 - centre_r[k])[:, None]
        dc = (np.arange(c_lo, c_hi) + 0.5 - centre_c[k])[None, :]
        cos_t, sin_t = math.cos(theta[k]), math.sin(theta[k])
        u = (dc * cos_t + dr * sin_t) / semi_a[k]
        v = (-dc * sin_t + dr * cos_t) / semi_b[k]
        inside = u * u + v * v <= 1.0
        # the pixel holding the centre is always covered
        inside[int(centre_r[k]) - r_lo, int(centre_c[k]) - c_lo] = True
        window = canopy[r_lo:r_hi, c_lo:c_hi]
        np.maximum(window, np.where(inside, heights[k], 0.0), out=window)
    return canopy


def gt_from_terrain(dtm, dsm, gt_slope_thresh=5.0, gt_min_area=25.0):
    """Ground truth: bare, low-slope ground in regions of at least ``gt_min_area``.

    A pixel is bare where the DSM equals the DTM; slope is taken from the
    DTM.  Nodata in either grid clears the pixel.
    """
    check_aligned(dtm.header, dsm.header, what="DTM and DSM")
    bare = (dsm.values == dtm.values) & ~dsm.nodata & ~dtm.nodata
    flat = threshold_flat(slope_degrees(dtm), gt_slope_thresh)
    candidate = BitMask(dtm.header, flat.bits & bare)
    return area_filter(candidate, min_pixels_for_area(gt_min_area, dtm.cellsize))


def generate(params=SynthParams()):
    """Generate ``(dtm, dsm, gt)``; identical params give bit-identical output."""
    rng = np.random.Generator(np.random.PCG64(int(params.seed)))
    size = int(params.size)
    levels = max(1, math.ceil(math.log2(size - 1)))
    terrain = diamond_square(rng, levels, params.relief_amplitude, params.roughness)
    terrain = terrain[:size, :size] + params.base_elevation

    canopy = _stamp_vegetation(rng, terrain.shape, params.blob_count(),
                               params.blob_radius_range, params.vegetation_height_range)
    dtm = DemGrid.from_array(terrain, cellsize=params.cellsize)
    dsm = dtm.with_values(terrain + canopy)
    gt = gt_from_terrain(dtm, dsm, params.gt_slope_thresh, params.gt_min_area)
    return SynthResult(dtm, dsm, gt)
