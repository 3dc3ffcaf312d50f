"""Core raster containers.

All containers are immutable: the numpy buffers they hold are flagged
read-only on construction so they can be shared freely between workers.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .exceptions import GridMismatch, NonPositiveCellsize, NonPositiveDimension

DEFAULT_NODATA = -9999.0


def _frozen(arr, dtype):
    out = np.array(arr, dtype=dtype, copy=True)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class GridHeader:
    """Georeferencing shared by every raster derived from the same tile."""

    ncols: int
    nrows: int
    xllcorner: float = 0.0
    yllcorner: float = 0.0
    cellsize: float = 1.0
    nodata_value: float = DEFAULT_NODATA

    def __post_init__(self):
        if self.ncols <= 0 or self.nrows <= 0:
            raise NonPositiveDimension(
                f"grid dimensions must be positive, got {self.nrows}x{self.ncols}")
        if not self.cellsize > 0:
            raise NonPositiveCellsize(f"cellsize must be positive, got {self.cellsize}")

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    @property
    def cell_area(self):
        return self.cellsize * self.cellsize

    def aligned(self, other):
        return self == other


def check_aligned(*headers, what="grids"):
    """Raise GridMismatch unless every header is identical to the first."""
    first = headers[0]
    for h in headers[1:]:
        if h != first:
            raise GridMismatch(f"{what} are not aligned: {first} vs {h}")


@dataclass(frozen=True, eq=False)
class DemGrid:
    """Elevation raster in meters; row 0 is the northernmost row.

    ``values`` holds the header's sentinel wherever ``nodata`` is set.
    """

    header: GridHeader
    values: np.ndarray
    nodata: np.ndarray = field(default=None)

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        if values.shape != self.header.shape:
            raise GridMismatch(
                f"payload shape {values.shape} does not match header {self.header.shape}")
        if self.nodata is None:
            nodata = ~np.isfinite(values) | (values == self.header.nodata_value)
        else:
            nodata = np.asarray(self.nodata, dtype=bool)
            if nodata.shape != values.shape:
                raise GridMismatch("nodata mask shape does not match payload")
            nodata = nodata | ~np.isfinite(values)
        values = np.where(nodata, self.header.nodata_value, values)
        object.__setattr__(self, "values", _frozen(values, np.float64))
        object.__setattr__(self, "nodata", _frozen(nodata, bool))

    @classmethod
    def from_array(cls, values, cellsize=1.0, xllcorner=0.0, yllcorner=0.0,
                   nodata_value=DEFAULT_NODATA, nodata=None):
        values = np.asarray(values, dtype=np.float64)
        if values.ndim != 2:
            raise NonPositiveDimension(f"expected a 2-D array, got {values.ndim}-D")
        nrows, ncols = values.shape
        header = GridHeader(ncols, nrows, float(xllcorner), float(yllcorner),
                            float(cellsize), float(nodata_value))
        return cls(header, values, nodata)

    @property
    def ncols(self):
        return self.header.ncols

    @property
    def nrows(self):
        return self.header.nrows

    @property
    def cellsize(self):
        return self.header.cellsize

    @property
    def shape(self):
        return self.header.shape

    def with_values(self, values, nodata=None):
        """Same header, new payload."""
        return DemGrid(self.header, values, nodata)

    def masked(self):
        """Values as a float array with NaN in nodata cells."""
        return np.where(self.nodata, np.nan, self.values)

    def __eq__(self, other):
        if not isinstance(other, DemGrid):
            return NotImplemented
        return (self.header == other.header
                and np.array_equal(self.nodata, other.nodata)
                and np.array_equal(self.values, other.values))

    __hash__ = None

    def __repr__(self):
        h = self.header
        return f"DemGrid({h.nrows}x{h.ncols}, cellsize={h.cellsize}, nodata={int(self.nodata.sum())})"


@dataclass(frozen=True, eq=False)
class BitMask:
    """Boolean raster sharing a tile's georeferencing."""

    header: GridHeader
    bits: np.ndarray

    def __post_init__(self):
        bits = np.asarray(self.bits, dtype=bool)
        if bits.shape != self.header.shape:
            raise GridMismatch(
                f"mask shape {bits.shape} does not match header {self.header.shape}")
        object.__setattr__(self, "bits", _frozen(bits, bool))

    @property
    def shape(self):
        return self.header.shape

    def count(self):
        return int(self.bits.sum())

    def to_grid(self):
        """Encode as a 0/1 elevation-style grid for ASC export."""
        return DemGrid(self.header, self.bits.astype(np.float64))

    @classmethod
    def from_grid(cls, grid):
        """Decode a 0/1 grid; nodata and zero cells are clear."""
        return cls(grid.header, (grid.values != 0) & ~grid.nodata)

    def __eq__(self, other):
        if not isinstance(other, BitMask):
            return NotImplemented
        return self.header == other.header and np.array_equal(self.bits, other.bits)

    __hash__ = None

    def __and__(self, other):
        check_aligned(self.header, other.header, what="masks")
        return BitMask(self.header, self.bits & other.bits)

    def __or__(self, other):
        check_aligned(self.header, other.header, what="masks")
        return BitMask(self.header, self.bits | other.bits)

    def __sub__(self, other):
        check_aligned(self.header, other.header, what="masks")
        return BitMask(self.header, self.bits & ~other.bits)

    def __invert__(self):
        return BitMask(self.header, ~self.bits)
