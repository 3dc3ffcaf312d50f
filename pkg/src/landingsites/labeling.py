"""8-connected component labeling and area filtering of binary masks."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .exceptions import InvalidParameter
from .grid import BitMask, GridHeader

_EIGHT = np.ones((3, 3), dtype=bool)


@dataclass(frozen=True, eq=False)
class LabelMap:
    """Component ids per pixel (0 is background).

    Ids are dense and assigned in raster-scan order of each component's
    first pixel.  ``component_sizes[k]`` is the pixel count of component
    ``k``; entry 0 counts background pixels.
    """

    header: GridHeader
    labels: np.ndarray
    component_sizes: np.ndarray

    @property
    def n_components(self):
        return len(self.component_sizes) - 1


def connected_components(mask):
    labels, n = ndimage.label(mask.bits, structure=_EIGHT)
    labels = labels.astype(np.int64, copy=False)
    sizes = np.bincount(labels.ravel(), minlength=n + 1)
    labels.setflags(write=False)
    sizes.setflags(write=False)
    return LabelMap(mask.header, labels, sizes)


def filter_by_area(labels, min_pixels):
    """Keep the pixels of components holding at least ``min_pixels`` pixels."""
    if min_pixels < 1:
        raise InvalidParameter(f"min_pixels must be >= 1, got {min_pixels}")
    keep = labels.component_sizes >= min_pixels
    keep[0] = False
    return BitMask(labels.header, keep[labels.labels])


def area_filter(mask, min_pixels):
    """Shorthand for ``filter_by_area(connected_components(mask), min_pixels)``."""
    return filter_by_area(connected_components(mask), min_pixels)
