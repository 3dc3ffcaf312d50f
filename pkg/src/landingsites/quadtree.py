"""Quadtree height-variance baseline detector.

The DEM is split recursively into quadrants until each partition's height
variance falls below a limit (or the partition reaches the minimum side).
Accepted partitions that share an edge and have similar mean heights are
merged, and merged regions large enough for a landing footprint are
reported as landing sites.  Above-ground objects are not considered.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components as graph_components
from sklearn.base import BaseEstimator

from .exceptions import InvalidParameter
from .pipeline import LandingClass, LandingMap
from .validation import check_dem, check_positive, min_pixels_for_area


@dataclass(frozen=True)
class QuadNode:
    row0: int
    col0: int
    nrows: int
    ncols: int
    mean: float
    variance: float
    n_valid: int
    children: tuple = ()

    @property
    def rect(self):
        return (self.row0, self.col0, self.nrows, self.ncols)

    @property
    def is_leaf(self):
        return not self.children

    def leaves(self):
        stack = [self]
        while stack:
            node = stack.pop()
            if node.children:
                stack.extend(reversed(node.children))
            else:
                yield node


@dataclass(frozen=True)
class BaselineParams:
    var_thresh: float = 1.0
    height_tol: float = 1.0
    min_leaf: int = 4
    min_area: float = 25.0

    def __post_init__(self):
        check_positive("var_thresh", self.var_thresh)
        check_positive("height_tol", self.height_tol)
        check_positive("min_area", self.min_area)
        if isinstance(self.min_leaf, bool) or int(self.min_leaf) != self.min_leaf \
                or self.min_leaf < 1:
            raise InvalidParameter(f"min_leaf must be an integer >= 1, got {self.min_leaf!r}")

    def accepts(self, node):
        return node.n_valid > 0 and node.variance <= self.var_thresh


def _stats(values, nodata, r0, c0, nr, nc):
    block = values[r0:r0 + nr, c0:c0 + nc]
    holes = nodata[r0:r0 + nr, c0:c0 + nc]
    if holes.any():
        block = block[~holes]
    n = block.size
    if n == 0:
        return float("nan"), float("nan"), 0
    return float(block.mean()), float(block.var()), n


def build_quadtree(dem, params=BaselineParams()):
    """Partition ``dem`` by height variance.

    A node is split into four while its population variance exceeds
    ``params.var_thresh`` and both sides are longer than ``params.min_leaf``;
    with odd sides the first (top/left) child takes the extra row/column.
    Nodata cells are ignored in the statistics, and a partition with no
    valid cell is never split.
    """
    check_dem(dem)
    values, nodata = dem.values, dem.nodata
    min_leaf = int(params.min_leaf)

    def build(r0, c0, nr, nc):
        mean, var, n = _stats(values, nodata, r0, c0, nr, nc)
        split = n > 0 and var > params.var_thresh and min(nr, nc) > min_leaf
        if not split:
            return QuadNode(r0, c0, nr, nc, mean, var, n)
        top, left = (nr + 1) // 2, (nc + 1) // 2
        children = (
            build(r0, c0, top, left),
            build(r0, c0 + left, top, nc - left),
            build(r0 + top, c0, nr - top, left),
            build(r0 + top, c0 + left, nr - top, nc - left),
        )
        return QuadNode(r0, c0, nr, nc, mean, var, n, children)

    return build(0, 0, dem.nrows, dem.ncols)


def _leaf_adjacency(leaf_ids):
    """Unique (i, j) pairs, i < j, of leaves sharing at least one pixel edge."""
    pairs = []
    for a, b in ((leaf_ids[:, :-1], leaf_ids[:, 1:]), (leaf_ids[:-1, :], leaf_ids[1:, :])):
        differ = a != b
        pairs.append(np.stack([a[differ], b[differ]], axis=1))
    pairs = np.concatenate(pairs)
    if pairs.size == 0:
        return pairs.reshape(0, 2)
    pairs.sort(axis=1)
    return np.unique(pairs, axis=0)


def baseline_detect(dem, params=BaselineParams(), tree=None):
    """Landing map from accepted, merged quadtree partitions.

    Never emits ``NO_LANDING_OBSTACLE``.
    """
    if tree is None:
        tree = build_quadtree(dem, params)
    leaves = list(tree.leaves())
    n = len(leaves)
    leaf_ids = np.empty(dem.shape, dtype=np.int64)
    for k, leaf in enumerate(leaves):
        leaf_ids[leaf.row0:leaf.row0 + leaf.nrows, leaf.col0:leaf.col0 + leaf.ncols] = k
    accepted = np.array([params.accepts(leaf) for leaf in leaves], dtype=bool)
    means = np.array([leaf.mean for leaf in leaves])
    sizes = np.array([leaf.n_valid for leaf in leaves], dtype=np.int64)

    pairs = _leaf_adjacency(leaf_ids)
    if len(pairs):
        i, j = pairs[:, 0], pairs[:, 1]
        join = accepted[i] & accepted[j] & (np.abs(means[i] - means[j]) <= params.height_tol)
        i, j = i[join], j[join]
    else:
        i = j = np.empty(0, dtype=np.int64)
    graph = coo_matrix((np.ones(len(i), dtype=np.int8), (i, j)), shape=(n, n))
    _, region = graph_components(graph, directed=False)

    region_area = np.bincount(region, weights=sizes * accepted, minlength=region.max() + 1)
    min_pixels = min_pixels_for_area(params.min_area, dem.cellsize)
    landing_leaf = accepted & (region_area[region] >= min_pixels)

    landing = landing_leaf[leaf_ids] & ~dem.nodata
    classes = np.where(landing, LandingClass.LANDING, LandingClass.NO_LANDING_TERRAIN)
    return LandingMap(dem.header, classes)


def sweep_var_thresh(dem, gt, candidates, params=BaselineParams()):
    """Pick the variance limit with the best pixel precision against ``gt``.

    Ties go to the smaller limit; a candidate whose prediction is empty
    (undefined precision) ranks below every defined one.

    Returns
    -------
    best : float
    results : list of (float, EvalReport)
    """
    from .evaluation import evaluate

    candidates = sorted(float(v) for v in candidates)
    if not candidates:
        raise InvalidParameter("variance sweep needs at least one candidate")
    results = []
    best, best_key = None, None
    for v in candidates:
        report = evaluate(baseline_detect(dem, replace(params, var_thresh=v)), gt)
        results.append((v, report))
        key = -1.0 if report.precision is None else report.precision
        if best_key is None or key > best_key:
            best, best_key = v, key
    return best, results


class QuadtreeBaseline(BaseEstimator):
    """Estimator wrapper around :func:`baseline_detect`.

    When ``var_candidates`` is set, ``fit`` needs ground truth and picks
    ``var_thresh_`` from the candidates by precision; otherwise
    ``var_thresh_`` is just ``var_thresh``.
    """

    def __init__(self, var_thresh=1.0, height_tol=1.0, min_leaf=4, min_area=25.0,
                 var_candidates=None):
        self.var_thresh = var_thresh
        self.height_tol = height_tol
        self.min_leaf = min_leaf
        self.min_area = min_area
        self.var_candidates = var_candidates

    def _params(self, var_thresh):
        return BaselineParams(var_thresh, self.height_tol, self.min_leaf, self.min_area)

    def fit(self, dem, gt=None):
        if self.var_candidates is not None:
            if gt is None:
                raise InvalidParameter("a variance sweep needs ground truth")
            self.var_thresh_, self.sweep_results_ = sweep_var_thresh(
                dem, gt, self.var_candidates, self._params(self.var_thresh))
        else:
            self._params(self.var_thresh)
            self.var_thresh_ = float(self.var_thresh)
            self.sweep_results_ = []
        return self

    def predict(self, dem):
        var_thresh = getattr(self, "var_thresh_", self.var_thresh)
        return baseline_detect(dem, self._params(var_thresh))
