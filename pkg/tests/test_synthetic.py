import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from landingsites.ascii_grid import parse_asc, write_asc
from landingsites.exceptions import GridMismatch, InvalidParameter
from landingsites.labeling import connected_components
from landingsites.synthetic import SynthParams, diamond_square, generate, gt_from_terrain
from landingsites.terrain import slope_degrees
from landingsites.validation import min_pixels_for_area

from helpers import make_grid, ramp


def test_flat_world_degenerate():
    out = generate(SynthParams(seed=1, size=17, relief_amplitude=0.0, vegetation_density=0.0))
    assert np.unique(out.dtm.values).size == 1
    assert out.dsm == out.dtm
    assert out.gt.bits.all()


def test_no_vegetation_means_identical_models():
    out = generate(SynthParams(seed=9, size=33, vegetation_density=0.0))
    assert np.array_equal(out.dsm.values, out.dtm.values)


def test_deterministic_bytes():
    p = SynthParams(seed=42, size=129)
    a, b = generate(p), generate(p)
    for x, y in zip(a[:2], b[:2]):
        assert write_asc(x) == write_asc(y)
    assert write_asc(a.gt.to_grid()) == write_asc(b.gt.to_grid())


def test_seeds_differ():
    a = generate(SynthParams(seed=1, size=33))
    b = generate(SynthParams(seed=2, size=33))
    assert not np.array_equal(a.dtm.values, b.dtm.values)


def test_shape_and_cellsize():
    out = generate(SynthParams(seed=0, size=100, cellsize=2.5))
    assert out.dtm.shape == (100, 100) and out.dtm.cellsize == 2.5


@pytest.mark.parametrize("bad", [dict(size=8), dict(roughness=1.0), dict(roughness=0.0),
                                 dict(vegetation_density=1.5), dict(seed=-1),
                                 dict(vegetation_height_range=(5.0, 1.0)), dict(cellsize=0),
                                 dict(relief_amplitude=-1.0), dict(gt_slope_thresh=90)])
def test_parameter_validation(bad):
    with pytest.raises(InvalidParameter):
        SynthParams(**bad)


def test_diamond_square_amplitude_decay():
    rng = np.random.default_rng(0)
    h = diamond_square(rng, 3, amplitude=10.0, roughness=0.5)
    assert h.shape == (9, 9)
    # corners are within +-amplitude/2, and each later displacement is smaller still
    assert np.abs(h).max() <= 10.0 * (0.5 + 0.25 + 0.125 + 0.0625)


def test_vegetation_density_roughly_respected():
    p = SynthParams(seed=4, size=257, relief_amplitude=0.0, vegetation_density=0.2)
    out = generate(p)
    covered = (out.dsm.values > out.dtm.values).mean()
    # overlaps and clipping at the border keep the cover under the nominal density
    assert 0.1 < covered <= 0.2


@settings(max_examples=15, deadline=None)
@given(seed=st.integers(0, 2**64 - 1), size=st.integers(9, 80),
       relief=st.floats(0.0, 60.0), rough=st.floats(0.2, 0.8), dens=st.floats(0.0, 0.4))
def test_generator_invariants(seed, size, relief, rough, dens):
    p = SynthParams(seed=seed, size=size, relief_amplitude=relief, roughness=rough,
                    vegetation_density=dens, gt_min_area=10.0)
    dtm, dsm, gt = generate(p)
    assert (dsm.values >= dtm.values).all()
    slope = slope_degrees(dtm)
    assert (slope.degrees[gt.bits] <= p.gt_slope_thresh).all()
    assert (dsm.values[gt.bits] == dtm.values[gt.bits]).all()
    sizes = connected_components(gt).component_sizes[1:]
    assert (sizes >= min_pixels_for_area(p.gt_min_area, p.cellsize)).all()
    assert parse_asc(write_asc(dtm)) == dtm and parse_asc(write_asc(dsm)) == dsm


def test_gt_flat_no_vegetation():
    g = make_grid(np.zeros((10, 10)))
    assert gt_from_terrain(g, g, 5.0, 4.0).bits.all()


def test_gt_vegetation_patch_cleared():
    dtm = make_grid(np.zeros((10, 10)))
    dsm_vals = np.zeros((10, 10))
    dsm_vals[0:2, 0:2] = 8.0
    gt = gt_from_terrain(dtm, make_grid(dsm_vals), 5.0, 4.0)
    expected = np.ones((10, 10), bool)
    expected[0:2, 0:2] = False
    np.testing.assert_array_equal(gt.bits, expected)


def test_gt_small_region_excluded():
    dtm = make_grid(np.zeros((6, 6)))
    dsm_vals = np.zeros((6, 6))
    dsm_vals[:, 1] = 3.0
    gt = gt_from_terrain(dtm, make_grid(dsm_vals), 5.0, 7.0)
    assert not gt.bits[:, 0].any() and gt.bits[:, 2:].all()


def test_gt_steep_ramp_clear():
    r = ramp(12, 2.0)
    assert not gt_from_terrain(r, r, 5.0, 1.0).bits.any()


def test_gt_misaligned():
    with pytest.raises(GridMismatch):
        gt_from_terrain(make_grid(np.zeros((4, 4))), make_grid(np.zeros((4, 4)), cellsize=2.0))
