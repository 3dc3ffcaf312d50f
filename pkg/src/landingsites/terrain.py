"""Per-pixel terrain analytics: obstacle masking and Sobel slope."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import GridMismatch, GridTooSmall, NonPositiveThreshold, ThresholdOutOfRange
from .grid import BitMask, DemGrid, GridHeader, check_aligned

_BELOW_90 = np.nextafter(90.0, 0.0)


@dataclass(frozen=True, eq=False)
class SlopeMap:
    """Slope in degrees; ``undefined`` marks cells whose window touched nodata."""

    header: GridHeader
    degrees: np.ndarray
    undefined: np.ndarray

    def __post_init__(self):
        for name in ("degrees", "undefined"):
            arr = getattr(self, name)
            if arr.shape != self.header.shape:
                raise GridMismatch(f"{name} shape {arr.shape} does not match header")
            arr.setflags(write=False)

    def to_grid(self):
        """Export as a DemGrid with undefined cells written as nodata."""
        return DemGrid(self.header, np.where(self.undefined, 0.0, self.degrees), self.undefined)


def obstacle_mask(dsm, dtm, height_thresh):
    """Mark cells standing more than ``height_thresh`` meters above bare earth.

    Cells that are nodata in either grid are marked as well, so unknown
    ground is always treated as obstructed.
    """
    check_aligned(dsm.header, dtm.header, what="DSM and DTM")
    if not height_thresh > 0:
        raise NonPositiveThreshold(f"height_thresh must be > 0, got {height_thresh}")
    unknown = dsm.nodata | dtm.nodata
    with np.errstate(invalid="ignore"):
        above = (dsm.values - dtm.values) > height_thresh
    return BitMask(dsm.header, above | unknown)


def _neighbourhood(values):
    """The nine shifted views a..i of an edge-replicated array.

    Layout around the centre cell e::

        a b c
        d e f
        g h i
    """
    p = np.pad(values, 1, mode="edge")
    nr, nc = values.shape
    views = {}
    for name, (dr, dc) in zip("abcdefghi", [(r, c) for r in range(3) for c in range(3)]):
        views[name] = p[dr:dr + nr, dc:dc + nc]
    return views


def slope_degrees(dem):
    """Slope of every cell of ``dem`` via the GIS rate-of-change formulas.

    ``dz/dx = ((c + 2f + i) - (a + 2d + g)) / (8 * cellsize)`` and
    ``dz/dy = ((g + 2h + i) - (a + 2b + c)) / (8 * cellsize)`` over the
    3x3 window, replicating edge cells at the raster border, and the slope
    is ``degrees(arctan(hypot(dz/dx, dz/dy)))``.

    Raises
    ------
    GridTooSmall
        If either dimension is below 3.
    """
    if dem.nrows < 3 or dem.ncols < 3:
        raise GridTooSmall(f"slope needs at least 3x3 cells, got {dem.nrows}x{dem.ncols}")
    v = _neighbourhood(dem.values)
    a, b, c, d, f, g, h, i = (v[k] for k in "abcdfghi")
    denom = 8.0 * dem.cellsize
    dzdx = ((c + 2.0 * f + i) - (a + 2.0 * d + g)) / denom
    dzdy = ((g + 2.0 * h + i) - (a + 2.0 * b + c)) / denom
    degrees = np.degrees(np.arctan(np.hypot(dzdx, dzdy)))
    # arctan of an enormous gradient rounds to exactly 90
    degrees = np.minimum(degrees, _BELOW_90)

    undefined = np.zeros(dem.shape, dtype=bool)
    if dem.nodata.any():
        for view in _neighbourhood(dem.nodata).values():
            undefined |= view
    degrees = np.where(undefined, np.nan, degrees)
    return SlopeMap(dem.header, degrees, undefined)


def threshold_flat(slope, slope_thresh):
    """Cells whose defined slope is at most ``slope_thresh`` degrees."""
    if not 0 < slope_thresh < 90:
        raise ThresholdOutOfRange(f"slope_thresh must lie in (0, 90), got {slope_thresh}")
    with np.errstate(invalid="ignore"):
        flat = slope.degrees <= slope_thresh
    return BitMask(slope.header, flat & ~slope.undefined)
