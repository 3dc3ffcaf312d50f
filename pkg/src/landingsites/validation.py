"""Parameter and input checks shared by the estimators and the CLI."""

from __future__ import annotations

import math
import numbers

from .exceptions import InvalidParameter, NonPositiveThreshold
from .grid import DemGrid

# absorbs representation error such as 25 / 1.2**2 landing a hair above 17.36...
_CEIL_SLACK = 1e-9


def check_positive(name, value, exc=InvalidParameter):
    if isinstance(value, bool) or not isinstance(value, numbers.Real) or not value > 0 \
            or not math.isfinite(value):
        raise exc(f"{name} must be a positive finite number, got {value!r}")
    return float(value)


def check_threshold(name, value):
    return check_positive(name, value, NonPositiveThreshold)


def check_dem(obj, name="dem"):
    if not isinstance(obj, DemGrid):
        raise InvalidParameter(f"{name} must be a DemGrid, got {type(obj).__name__}")
    return obj


def min_pixels_for_area(min_area, cellsize):
    """Pixel-count floor covering ``min_area`` square meters (at least 1)."""
    check_positive("min_area", min_area)
    check_positive("cellsize", cellsize)
    ratio = min_area / (cellsize * cellsize)
    return max(1, math.ceil(ratio * (1.0 - _CEIL_SLACK)))
