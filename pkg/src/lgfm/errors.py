"""Exception types shared across the package."""


class LgfmError(Exception):
    """Base class for all package errors."""


class UnsupportedFormat(LgfmError):
    """The file is not in a format this package can decode."""


class CorruptHeader(LgfmError):
    """Magic number, dimensions, or header fields are invalid."""


class TruncatedPayload(LgfmError):
    """The file ended before the full raster could be read."""


class ImageTooSmall(LgfmError):
    """Raster is below the 8x8 pipeline minimum."""


class DegenerateCoefficients(LgfmError):
    """All RGB-to-luminance weights are zero."""


class InvalidTable(LgfmError):
    """Perceptual lookup table is non-monotone or has too few rows."""


class DimensionMismatch(LgfmError):
    """Two rasters that must share a shape do not."""


class DegenerateInput(LgfmError):
    """Input has no usable variation (constant scores, all ties, ...)."""


class LengthMismatch(LgfmError):
    """Paired sequences have different lengths."""
