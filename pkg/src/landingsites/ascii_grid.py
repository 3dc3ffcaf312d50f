"""Reading and writing rasters in the Esri ASCII grid format.

The format is a short ``key value`` header followed by ``nrows`` lines of
whitespace-separated values, north row first::

    ncols        4
    nrows        3
    xllcorner    0.0
    yllcorner    0.0
    cellsize     1.0
    NODATA_value -9999
    1 2 3 4
    ...

Only square cells are supported.
"""

from __future__ import annotations

import io
import math
import os

import numpy as np

from .exceptions import (CellCountMismatch, MissingHeaderField, NonNumericToken,
                         NonPositiveCellsize, NonPositiveDimension, NonSquareCells)
from .grid import DEFAULT_NODATA, DemGrid, GridHeader, check_aligned

_REQUIRED = ("ncols", "nrows", "xllcorner", "yllcorner", "cellsize")


def _is_number(token):
    try:
        float(token)
    except ValueError:
        return False
    return True


def _split_header(lines):
    header = {}
    n = 0
    for line in lines:
        parts = line.split()
        if not parts:
            n += 1
            continue
        if _is_number(parts[0]):
            break
        if len(parts) != 2:
            raise NonNumericToken(-1, -1, line.strip())
        header[parts[0].lower()] = parts[1]
        n += 1
    return header, n


def _header_float(header, key):
    token = header[key]
    try:
        return float(token)
    except ValueError:
        raise NonNumericToken(-1, -1, token) from None


def _resolve_header(raw):
    if "cellsize" not in raw:
        # some writers emit dx/dy or xcellsize/ycellsize pairs instead
        for kx, ky in (("dx", "dy"), ("xcellsize", "ycellsize")):
            if kx in raw and ky in raw:
                dx, dy = _header_float(raw, kx), _header_float(raw, ky)
                if dx != dy:
                    raise NonSquareCells(f"non-square cells {dx} x {dy}")
                raw["cellsize"] = raw[kx]
    for corner, center in (("xllcorner", "xllcenter"), ("yllcorner", "yllcenter")):
        if corner not in raw and center in raw and "cellsize" in raw:
            half = _header_float(raw, "cellsize") / 2.0
            raw[corner] = repr(_header_float(raw, center) - half)
    for key in _REQUIRED:
        if key not in raw:
            raise MissingHeaderField(key)

    def as_int(key):
        value = _header_float(raw, key)
        if value != int(value):
            raise NonPositiveDimension(f"{key} must be an integer, got {raw[key]}")
        if value <= 0:
            raise NonPositiveDimension(f"{key} must be positive, got {raw[key]}")
        return int(value)

    ncols, nrows = as_int("ncols"), as_int("nrows")
    cellsize = _header_float(raw, "cellsize")
    if not cellsize > 0:
        raise NonPositiveCellsize(f"cellsize must be positive, got {raw['cellsize']}")
    nodata = _header_float(raw, "nodata_value") if "nodata_value" in raw else DEFAULT_NODATA
    return GridHeader(ncols, nrows, _header_float(raw, "xllcorner"),
                      _header_float(raw, "yllcorner"), cellsize, nodata)


def parse_asc(text):
    """Parse Esri ASCII grid text (or a readable file object) into a DemGrid.

    Header keys are matched case-insensitively and ``NODATA_value``
    defaults to -9999.

    Raises
    ------
    MissingHeaderField, NonNumericToken, CellCountMismatch,
    NonPositiveDimension, NonPositiveCellsize, NonSquareCells
    """
    if not isinstance(text, str):
        text = text.read()
    lines = text.splitlines()
    raw, n_header = _split_header(lines)
    header = _resolve_header(raw)

    tokens = " ".join(lines[n_header:]).split()
    expected = header.ncols * header.nrows
    if len(tokens) != expected:
        raise CellCountMismatch(expected, len(tokens))
    try:
        values = np.array(tokens, dtype=np.float64)
    except ValueError:
        values = None
    if values is None or not np.isfinite(values).all():
        for k, tok in enumerate(tokens):
            try:
                ok = math.isfinite(float(tok))
            except ValueError:
                ok = False
            if not ok:
                raise NonNumericToken(k // header.ncols, k % header.ncols, tok)
    values = values.reshape(header.shape)
    return DemGrid(header, values, values == header.nodata_value)


def _format_value(v):
    if v.is_integer() and abs(v) < 2**53 and not (v == 0 and math.copysign(1.0, v) < 0):
        return str(int(v))
    # repr is the shortest string that round-trips a float64
    return repr(v)


def _format_header_float(v):
    return _format_value(float(v))


def write_asc(grid, stream=None):
    """Serialize a DemGrid as Esri ASCII grid text.

    Values are written with the shortest representation that parses back to
    the identical float64, so ``parse_asc(write_asc(g)) == g``.  When
    ``stream`` is given the text is written to it and nothing is returned.
    """
    h = grid.header
    out = io.StringIO() if stream is None else stream
    out.write(f"ncols {h.ncols}\n")
    out.write(f"nrows {h.nrows}\n")
    out.write(f"xllcorner {_format_header_float(h.xllcorner)}\n")
    out.write(f"yllcorner {_format_header_float(h.yllcorner)}\n")
    out.write(f"cellsize {_format_header_float(h.cellsize)}\n")
    out.write(f"NODATA_value {_format_header_float(h.nodata_value)}\n")
    fmt = _format_value
    for row in grid.values.tolist():
        out.write(" ".join(map(fmt, row)))
        out.write("\n")
    if stream is None:
        return out.getvalue()
    return None


def read_asc(path):
    with open(os.fspath(path), "r", encoding="ascii", newline="") as fh:
        return parse_asc(fh.read())


def save_asc(grid, path):
    with open(os.fspath(path), "w", encoding="ascii", newline="\n") as fh:
        write_asc(grid, fh)


def fill_dsm_from_dtm(dsm, dtm):
    """Replace DSM holes with the corresponding DTM elevations.

    Cells that are nodata in both inputs stay nodata; every valid DSM cell
    is returned untouched.
    """
    check_aligned(dsm.header, dtm.header, what="DSM and DTM")
    take = dsm.nodata & ~dtm.nodata
    if not take.any():
        return dsm
    values = np.where(take, dtm.values, dsm.values)
    return DemGrid(dsm.header, values, dsm.nodata & ~take)
