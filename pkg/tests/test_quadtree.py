import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from sklearn.base import clone

from landingsites.exceptions import InvalidParameter
from landingsites.grid import BitMask
from landingsites.pipeline import LandingClass
from landingsites.quadtree import (BaselineParams, QuadtreeBaseline, baseline_detect,
                                   build_quadtree, sweep_var_thresh)
from landingsites.validation import min_pixels_for_area

from helpers import make_grid, ramp
from oracles import quadtree_landing_oracle

L, T = LandingClass.LANDING, LandingClass.NO_LANDING_TERRAIN


def test_constant_grid_single_leaf():
    root = build_quadtree(make_grid(np.full((16, 16), 7.0)), BaselineParams(var_thresh=1.0))
    assert root.is_leaf and root.variance == 0.0 and root.mean == 7.0


def test_population_variance():
    root = build_quadtree(make_grid([[0, 0], [100, 100]]),
                          BaselineParams(var_thresh=1e4, min_leaf=1))
    assert root.variance == 2500.0


def test_split_halves_until_uniform():
    vals = np.zeros((4, 4))
    vals[:, 2:] = 100.0
    root = build_quadtree(make_grid(vals), BaselineParams(var_thresh=1.0, min_leaf=1))
    assert root.variance == 2500.0 and len(root.children) == 4
    leaves = list(root.leaves())
    assert [leaf.rect for leaf in leaves] == [(0, 0, 2, 2), (0, 2, 2, 2), (2, 0, 2, 2),
                                               (2, 2, 2, 2)]
    assert all(leaf.variance == 0.0 for leaf in leaves)


def test_odd_split_gives_extra_to_first_child():
    vals = np.arange(35.0).reshape(5, 7)
    root = build_quadtree(make_grid(vals), BaselineParams(var_thresh=1e-3, min_leaf=4))
    assert [c.rect for c in root.children] == [(0, 0, 3, 4), (0, 4, 3, 3), (3, 0, 2, 4),
                                                (3, 4, 2, 3)]


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), nr=st.integers(1, 40), nc=st.integers(1, 40),
       var=st.floats(0.01, 100.0), min_leaf=st.integers(1, 6))
def test_leaves_tile_raster(seed, nr, nc, var, min_leaf):
    vals = np.random.default_rng(seed).normal(scale=5.0, size=(nr, nc))
    root = build_quadtree(make_grid(vals), BaselineParams(var_thresh=var, min_leaf=min_leaf))
    cover = np.zeros((nr, nc), int)
    for leaf in root.leaves():
        assert leaf.nrows > 0 and leaf.ncols > 0
        assert leaf.variance <= var or min(leaf.nrows, leaf.ncols) <= min_leaf
        cover[leaf.row0:leaf.row0 + leaf.nrows, leaf.col0:leaf.col0 + leaf.ncols] += 1
    assert (cover == 1).all()


def test_all_nodata_partition_never_accepted():
    holes = np.zeros((8, 8), bool)
    holes[:4, :4] = True
    vals = np.zeros((8, 8))
    vals[:, 4:] = 50.0
    dem = make_grid(vals, nodata=holes)
    m = baseline_detect(dem, BaselineParams(var_thresh=1.0, min_leaf=2, min_area=1.0))
    assert (m.classes[holes] == T).all()
    assert (m.classes[~holes] == L).all()


def test_constant_grid_all_landing():
    m = baseline_detect(make_grid(np.full((10, 10), 3.0)), BaselineParams(min_area=50.0))
    assert (m.classes == L).all()


def test_cliff_plateaus_not_merged():
    vals = np.zeros((16, 16))
    vals[:, 8:] = 100.0
    dem = make_grid(vals)
    base = dict(var_thresh=1.0, height_tol=1.0, min_leaf=1)
    both = baseline_detect(dem, BaselineParams(min_area=128.0, **base))
    assert (both.classes == L).all()
    # merged the plateaus would cover 256 pixels; apart each has 128
    neither = baseline_detect(dem, BaselineParams(min_area=129.0, **base))
    assert (neither.classes == T).all()


def test_steep_everywhere_all_terrain():
    dem = ramp(16, 10.0)
    m = baseline_detect(dem, BaselineParams(var_thresh=1.0, min_leaf=4, min_area=1.0))
    assert (m.classes == T).all()


def test_never_emits_obstacle():
    vals = np.random.default_rng(0).normal(size=(20, 20))
    m = baseline_detect(make_grid(vals), BaselineParams(var_thresh=0.5, min_leaf=2, min_area=2))
    assert not (m.classes == LandingClass.NO_LANDING_OBSTACLE).any()


def _terrain(seed, n=24):
    rng = np.random.default_rng(seed)
    steps = rng.integers(0, 4, size=(n // 4, n // 4)).astype(float) * rng.uniform(0.2, 3.0)
    vals = np.kron(steps, np.ones((4, 4))) + rng.normal(scale=0.2, size=(n, n))
    holes = rng.random((n, n)) < 0.02
    return make_grid(vals, nodata=holes)


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), var=st.floats(0.01, 5.0), tol=st.floats(0.1, 3.0),
       min_leaf=st.integers(1, 4), min_area=st.floats(1.0, 80.0))
def test_matches_geometric_merge_oracle(seed, var, tol, min_leaf, min_area):
    dem = _terrain(seed)
    params = BaselineParams(var_thresh=var, height_tol=tol, min_leaf=min_leaf, min_area=min_area)
    leaves = list(build_quadtree(dem, params).leaves())
    expected = quadtree_landing_oracle(leaves, params.accepts, tol,
                                       min_pixels_for_area(min_area, dem.cellsize),
                                       dem.shape, dem.nodata.tolist())
    got = baseline_detect(dem, params).classes == L
    assert got.tolist() == expected


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), v1=st.floats(0.01, 5.0), v2=st.floats(0.01, 5.0))
def test_lower_var_thresh_never_adds_landing_single_pixel_floor(seed, v1, v2):
    lo, hi = sorted((v1, v2))
    dem = _terrain(seed)
    a = baseline_detect(dem, BaselineParams(var_thresh=lo, min_leaf=1, min_area=1.0))
    b = baseline_detect(dem, BaselineParams(var_thresh=hi, min_leaf=1, min_area=1.0))
    assert not ((a.classes == L) & (b.classes == T)).any()


def test_sweep_ties_go_to_smaller_threshold():
    dem = make_grid(np.full((8, 8), 1.0))
    gt = BitMask(dem.header, np.ones((8, 8), bool))
    best, results = sweep_var_thresh(dem, gt, [5.0, 0.5], BaselineParams(min_area=1.0))
    assert best == 0.5
    assert [v for v, _ in results] == [0.5, 5.0]


def test_sweep_picks_max_precision():
    # left half flat, right half noisy; only the flat half is landable
    rng = np.random.default_rng(3)
    vals = np.zeros((16, 16))
    vals[:, 8:] = rng.normal(scale=1.0, size=(16, 8))
    dem = make_grid(vals)
    gt = BitMask(dem.header, np.zeros((16, 16), bool) | (np.arange(16) < 8)[None, :])
    params = BaselineParams(min_leaf=2, min_area=4.0, height_tol=0.1)
    reports = {v: sweep_var_thresh(dem, gt, [v], params)[1][0][1] for v in (0.01, 100.0)}
    assert reports[0.01].precision > reports[100.0].precision
    best, _ = sweep_var_thresh(dem, gt, [100.0, 0.01], params)
    assert best == 0.01


def test_single_candidate_sweep_equals_fixed_run():
    dem = _terrain(5)
    gt = BitMask(dem.header, np.ones(dem.shape, bool))
    est = QuadtreeBaseline(var_candidates=[0.3], min_leaf=2, min_area=4.0).fit(dem, gt)
    fixed = QuadtreeBaseline(var_thresh=0.3, min_leaf=2, min_area=4.0).fit(dem)
    assert est.var_thresh_ == 0.3
    assert est.predict(dem) == fixed.predict(dem)


def test_estimator_params_and_errors():
    est = QuadtreeBaseline(var_thresh=2.0)
    assert clone(est).get_params()["var_thresh"] == 2.0
    with pytest.raises(InvalidParameter):
        QuadtreeBaseline(var_candidates=[1.0]).fit(make_grid(np.zeros((4, 4))))
    with pytest.raises(InvalidParameter):
        BaselineParams(min_leaf=0)
    with pytest.raises(InvalidParameter):
        BaselineParams(var_thresh=0)
