"""Landing-site detection from a DSM/DTM pair.

The pipeline repairs DSM holes from the DTM, masks above-ground objects,
keeps flat cells, drops flat regions too small for a landing footprint and
finally removes obstacles from what remains.
"""

from __future__ import annotations

import enum
from dataclasses import asdict, dataclass

import numpy as np
from sklearn.base import BaseEstimator

from .ascii_grid import fill_dsm_from_dtm
from .exceptions import GridMismatch, InvalidParameter
from .grid import BitMask, DemGrid, GridHeader, check_aligned
from .labeling import area_filter
from .terrain import obstacle_mask, slope_degrees, threshold_flat
from .validation import check_dem, check_positive, check_threshold, min_pixels_for_area


class LandingClass(enum.IntEnum):
    """Per-pixel classes, valued by their ASC code."""

    NO_LANDING_TERRAIN = 0
    LANDING = 1
    NO_LANDING_OBSTACLE = 2


@dataclass(frozen=True, eq=False)
class LandingMap:
    header: GridHeader
    classes: np.ndarray

    def __post_init__(self):
        classes = np.asarray(self.classes, dtype=np.uint8)
        if classes.shape != self.header.shape:
            raise GridMismatch(f"class raster shape {classes.shape} does not match header")
        if classes.size and classes.max() > max(LandingClass):
            raise InvalidParameter("class raster holds codes outside {0, 1, 2}")
        classes = classes.copy()
        classes.setflags(write=False)
        object.__setattr__(self, "classes", classes)

    def mask(self, cls=LandingClass.LANDING):
        return BitMask(self.header, self.classes == cls)

    def counts(self):
        return {c.name: int((self.classes == c).sum()) for c in LandingClass}

    def to_grid(self):
        return DemGrid(self.header, self.classes.astype(np.float64))

    @classmethod
    def from_grid(cls, grid):
        """Decode an ASC grid of class codes; nodata cells become terrain."""
        codes = np.where(grid.nodata, 0.0, grid.values)
        valid = np.isin(codes, [int(c) for c in LandingClass])
        if not valid.all():
            r, c = np.argwhere(~valid)[0]
            raise InvalidParameter(f"invalid class code {codes[r, c]!r} at row {r}, col {c}")
        return cls(grid.header, codes.astype(np.uint8))

    def __eq__(self, other):
        if not isinstance(other, LandingMap):
            return NotImplemented
        return self.header == other.header and np.array_equal(self.classes, other.classes)

    __hash__ = None


@dataclass(frozen=True)
class DetectionParams:
    slope_thresh: float = 5.0
    height_thresh: float = 0.5
    min_area: float = 25.0
    strict_area: bool = True

    def __post_init__(self):
        check_threshold("slope_thresh", self.slope_thresh)
        check_threshold("height_thresh", self.height_thresh)
        check_positive("min_area", self.min_area)

    def min_pixels(self, cellsize):
        return min_pixels_for_area(self.min_area, cellsize)

    def describe(self):
        return " ".join(f"{k}={v}" for k, v in asdict(self).items())


@dataclass(frozen=True)
class DetectionLayers:
    """Intermediate rasters of one ``detect`` run, kept for inspection."""

    dsm: DemGrid
    obstacles: BitMask
    flat: BitMask
    large_flat: BitMask
    landing: BitMask


def detect_layers(dsm, dtm, params=DetectionParams()):
    check_dem(dsm, "dsm")
    check_dem(dtm, "dtm")
    check_aligned(dsm.header, dtm.header, what="DSM and DTM")
    repaired = fill_dsm_from_dtm(dsm, dtm)
    obstacles = obstacle_mask(repaired, dtm, params.height_thresh)
    flat = threshold_flat(slope_degrees(repaired), params.slope_thresh)
    min_pixels = params.min_pixels(dsm.cellsize)
    large_flat = area_filter(flat, min_pixels)
    landing = large_flat - obstacles
    if params.strict_area:
        landing = area_filter(landing, min_pixels)
    return DetectionLayers(repaired, obstacles, flat, large_flat, landing)


def classify(landing, obstacles):
    """Merge the landing and obstacle masks into a three-class map."""
    classes = np.full(landing.shape, LandingClass.NO_LANDING_TERRAIN, dtype=np.uint8)
    classes[landing.bits] = LandingClass.LANDING
    classes[obstacles.bits] = LandingClass.NO_LANDING_OBSTACLE
    return LandingMap(landing.header, classes)


def detect(dsm, dtm, params=DetectionParams()):
    """Classify every cell of an aligned DSM/DTM pair.

    Parameters
    ----------
    dsm, dtm : DemGrid
        Surface and bare-earth models of the same tile, at least 3x3.
    params : DetectionParams

    Returns
    -------
    LandingMap
    """
    layers = detect_layers(dsm, dtm, params)
    return classify(layers.landing, layers.obstacles)


class LandingSiteDetector(BaseEstimator):
    """Estimator wrapper around :func:`detect`.

    The detector has no learned state; ``fit`` only validates the
    hyper-parameters so the object composes with parameter searches.

    Examples
    --------
    >>> det = LandingSiteDetector(slope_thresh=4.0).fit()
    >>> landing_map = det.predict(dsm, dtm)  # doctest: +SKIP
    """

    def __init__(self, slope_thresh=5.0, height_thresh=0.5, min_area=25.0, strict_area=True):
        self.slope_thresh = slope_thresh
        self.height_thresh = height_thresh
        self.min_area = min_area
        self.strict_area = strict_area

    def _params(self):
        return DetectionParams(self.slope_thresh, self.height_thresh, self.min_area,
                               bool(self.strict_area))

    def fit(self, dsm=None, dtm=None, gt=None):
        self.params_ = self._params()
        return self

    def predict(self, dsm, dtm):
        # read hyper-parameters afresh so set_params takes effect without refitting
        return detect(dsm, dtm, self._params())

    def score(self, dsm, dtm, gt):
        """Pixel precision of the prediction against ``gt`` (NaN when undefined)."""
        from .evaluation import evaluate

        p = evaluate(self.predict(dsm, dtm), gt).precision
        return float("nan") if p is None else p
