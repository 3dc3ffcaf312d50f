import numpy as np

from landingsites.grid import DemGrid


def make_grid(values, cellsize=1.0, **kw):
    return DemGrid.from_array(np.asarray(values, dtype=float), cellsize=cellsize, **kw)


def ramp(n, rise_per_cell, cellsize=1.0):
    """Plane rising along columns by ``rise_per_cell`` meters per pixel."""
    cols = np.arange(n, dtype=float)
    return make_grid(np.tile(cols * rise_per_cell, (n, 1)), cellsize=cellsize)
