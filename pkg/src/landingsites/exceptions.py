"""Exception hierarchy shared by all raster operations."""


class RasterError(ValueError):
    """Base class for every error raised by this package."""


class AscParseError(RasterError):
    """Malformed Esri ASCII grid input."""


class MissingHeaderField(AscParseError):
    def __init__(self, field):
        super().__init__(f"missing header field {field!r}")
        self.field = field


class NonNumericToken(AscParseError):
    def __init__(self, row, col, token):
        super().__init__(f"non-numeric token {token!r} at row {row}, col {col}")
        self.row = row
        self.col = col
        self.token = token


class CellCountMismatch(AscParseError):
    def __init__(self, expected, found):
        super().__init__(f"expected {expected} cells, found {found}")
        self.expected = expected
        self.found = found


class NonPositiveDimension(AscParseError):
    pass


class NonPositiveCellsize(AscParseError):
    pass


class NonSquareCells(AscParseError):
    pass


class GridMismatch(RasterError):
    """Two rasters that must be aligned have different headers."""


class GridTooSmall(RasterError):
    pass


class NonPositiveThreshold(RasterError):
    pass


class ThresholdOutOfRange(RasterError):
    pass


class InvalidParameter(RasterError):
    pass
