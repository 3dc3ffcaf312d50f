"""Binary PPM (P6) rendering of landing maps."""

from __future__ import annotations

import os

import numpy as np

from .pipeline import LandingClass

LEGEND = {
    LandingClass.LANDING: (0, 0, 255),               # blue
    LandingClass.NO_LANDING_TERRAIN: (173, 216, 230),  # light blue
    LandingClass.NO_LANDING_OBSTACLE: (255, 255, 0),   # yellow
}

_PALETTE = np.zeros((len(LandingClass), 3), dtype=np.uint8)
for _cls, _rgb in LEGEND.items():
    _PALETTE[_cls] = _rgb


def render_map(landing_map):
    """Return the map as P6 bytes, row 0 at the top of the image."""
    nrows, ncols = landing_map.classes.shape
    header = f"P6\n{ncols} {nrows}\n255\n".encode("ascii")
    return header + _PALETTE[landing_map.classes].tobytes()


def write_ppm(landing_map, path):
    with open(os.fspath(path), "wb") as fh:
        fh.write(render_map(landing_map))


def read_ppm(data):
    """Decode P6 bytes written by :func:`render_map` into an (H, W, 3) array."""
    parts = data.split(b"\n", 3)
    if len(parts) != 4 or parts[0] != b"P6" or parts[2] != b"255":
        raise ValueError("not a maxval-255 P6 pixmap")
    width, height = (int(t) for t in parts[1].split())
    return np.frombuffer(parts[3], dtype=np.uint8).reshape(height, width, 3)
