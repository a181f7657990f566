"""HDR file I/O: Radiance RGBE (.hdr) and PFM readers plus writers for
round-trip testing, and conversion to a calibrated luminance raster.

All rasters are numpy float64 arrays.  ``HdrImage.rgb`` has shape
(height, width, 3) and holds nonnegative linear-light values; luminance
maps are 2-D arrays in cd/m^2.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import (
    CorruptHeader,
    DegenerateCoefficients,
    ImageTooSmall,
    TruncatedPayload,
    UnsupportedFormat,
)

MIN_SIZE = 8

# Rec.709 luma weights; the default calibration for RGB -> luminance.
REC709_COEFFS = (0.2126, 0.7152, 0.0722)


@dataclass(frozen=True)
class HdrImage:
    """Linear-light RGB raster with physical-luminance semantics."""

    rgb: np.ndarray  # (H, W, 3) float64, finite, >= 0

    def __post_init__(self):
        rgb = np.asarray(self.rgb, dtype=np.float64)
        if rgb.ndim != 3 or rgb.shape[2] != 3:
            raise ValueError("rgb must have shape (H, W, 3)")
        if rgb.shape[0] < MIN_SIZE or rgb.shape[1] < MIN_SIZE:
            raise ImageTooSmall(
                f"image is {rgb.shape[1]}x{rgb.shape[0]}; minimum is "
                f"{MIN_SIZE}x{MIN_SIZE}"
            )
        if not np.all(np.isfinite(rgb)) or np.any(rgb < 0):
            raise ValueError("rgb values must be finite and >= 0")
        object.__setattr__(self, "rgb", rgb)

    @property
    def width(self) -> int:
        return self.rgb.shape[1]

    @property
    def height(self) -> int:
        return self.rgb.shape[0]


# ---------------------------------------------------------------------------
# Radiance RGBE

_RADIANCE_MAGICS = (b"#?RADIANCE", b"#?RGBE")


def decode_rgbe(rgbe: np.ndarray) -> np.ndarray:
    """Decode (..., 4) uint8 RGBE samples to (..., 3) float64.

    Uses the Radiance convention (m/256)*2^(e-128); a zero exponent byte
    encodes black regardless of the mantissas.
    """
    rgbe = np.asarray(rgbe, dtype=np.uint8)
    mant = rgbe[..., :3].astype(np.float64)
    exp = rgbe[..., 3].astype(np.int32)
    scale = np.where(exp == 0, 0.0, np.ldexp(1.0 / 256.0, exp - 128))
    return mant * scale[..., None]


def encode_rgbe(rgb: np.ndarray) -> np.ndarray:
    """Encode (..., 3) linear floats into (..., 4) uint8 RGBE samples."""
    rgb = np.asarray(rgb, dtype=np.float64)
    out = np.zeros(rgb.shape[:-1] + (4,), dtype=np.uint8)
    v = rgb.max(axis=-1)
    nz = v >= 1e-32
    if np.any(nz):
        # frexp: v = m * 2^e with m in [0.5, 1)
        _, e = np.frexp(v[nz])
        scale = np.ldexp(256.0, -e)
        mant = np.clip(rgb[nz] * scale[..., None], 0, 255).astype(np.uint8)
        out[nz, :3] = mant
        out[nz, 3] = (e + 128).astype(np.uint8)
    return out


def _read_radiance_header(f) -> tuple[int, int]:
    magic = f.readline().rstrip(b"\r\n")
    if magic not in _RADIANCE_MAGICS:
        raise CorruptHeader(f"bad Radiance magic: {magic!r}")
    while True:
        line = f.readline()
        if not line:
            raise TruncatedPayload("EOF inside Radiance header")
        if line.strip() == b"":
            break
    res = f.readline().split()
    if len(res) != 4 or res[0] != b"-Y" or res[2] != b"+X":
        raise CorruptHeader(f"unsupported resolution line: {b' '.join(res)!r}")
    try:
        height, width = int(res[1]), int(res[3])
    except ValueError as exc:
        raise CorruptHeader("non-numeric image dimensions") from exc
    if height <= 0 or width <= 0:
        raise CorruptHeader("non-positive image dimensions")
    return width, height


def _read_exact(f, n: int) -> bytes:
    buf = f.read(n)
    if len(buf) != n:
        raise TruncatedPayload(f"expected {n} bytes, got {len(buf)}")
    return buf


def _read_rgbe_scanline(f, width: int) -> np.ndarray:
    """One scanline of RGBE samples, handling new-RLE, old-RLE, and flat."""
    head = _read_exact(f, 4)
    if head[0] == 2 and head[1] == 2 and (head[2] << 8 | head[3]) == width:
        # new-style: four run-length encoded component planes
        planes = np.empty((4, width), dtype=np.uint8)
        for c in range(4):
            pos = 0
            while pos < width:
                count = _read_exact(f, 1)[0]
                if count > 128:  # run
                    run = count - 128
                    if pos + run > width:
                        raise TruncatedPayload("RLE run overflows scanline")
                    planes[c, pos : pos + run] = _read_exact(f, 1)[0]
                    pos += run
                elif count > 0:  # literals
                    if pos + count > width:
                        raise TruncatedPayload("RLE literal overflows scanline")
                    planes[c, pos : pos + count] = np.frombuffer(
                        _read_exact(f, count), dtype=np.uint8
                    )
                    pos += count
                else:
                    raise CorruptHeader("zero-length RLE chunk")
        return planes.T.copy()
    # old-style: flat pixels with (1,1,1,n) repeat markers
    row = np.empty((width, 4), dtype=np.uint8)
    pixel = np.frombuffer(head, dtype=np.uint8)
    i = 0
    shift = 0
    while True:
        if pixel[0] == 1 and pixel[1] == 1 and pixel[2] == 1:
            if i == 0:
                raise CorruptHeader("repeat marker with no previous pixel")
            rep = int(pixel[3]) << shift
            if i + rep > width:
                raise TruncatedPayload("old-RLE repeat overflows scanline")
            row[i : i + rep] = row[i - 1]
            i += rep
            shift += 8
        else:
            row[i] = pixel
            i += 1
            shift = 0
        if i >= width:
            return row
        pixel = np.frombuffer(_read_exact(f, 4), dtype=np.uint8)


def read_hdr(path) -> HdrImage:
    """Read a Radiance RGBE (.hdr) file."""
    with open(path, "rb") as f:
        width, height = _read_radiance_header(f)
        rows = [_read_rgbe_scanline(f, width) for _ in range(height)]
    return HdrImage(decode_rgbe(np.stack(rows)))


def _rle_chunks(plane: np.ndarray):
    """Split a uint8 component plane into (is_run, payload) RLE chunks."""
    n = len(plane)
    i = 0
    while i < n:
        run = 1
        while i + run < n and run < 127 and plane[i + run] == plane[i]:
            run += 1
        if run >= 4:
            yield True, plane[i : i + run]
            i += run
            continue
        # collect literals until a worthwhile run starts
        j = i
        while j < n and j - i < 128:
            r = 1
            while j + r < n and r < 4 and plane[j + r] == plane[j]:
                r += 1
            if r >= 4:
                break
            j += 1
        yield False, plane[i:j]
        i = j


def write_hdr(path, img: HdrImage, rle: bool = True) -> None:
    """Write a Radiance RGBE (.hdr) file, RLE-encoded by default."""
    rgbe = encode_rgbe(img.rgb)
    with open(path, "wb") as f:
        f.write(b"#?RADIANCE\nFORMAT=32-bit_rle_rgbe\n\n")
        f.write(f"-Y {img.height} +X {img.width}\n".encode())
        use_rle = rle and 8 <= img.width <= 32767
        for row in rgbe:
            if not use_rle:
                f.write(row.tobytes())
                continue
            f.write(bytes((2, 2, img.width >> 8, img.width & 0xFF)))
            for c in range(4):
                for is_run, payload in _rle_chunks(row[:, c]):
                    if is_run:
                        f.write(bytes((128 + len(payload), payload[0])))
                    else:
                        f.write(bytes((len(payload),)))
                        f.write(payload.tobytes())


# ---------------------------------------------------------------------------
# PFM

def read_pfm(path) -> HdrImage:
    """Read a PFM file ('PF' color or 'Pf' grayscale, scale-sign endianness).

    Grayscale rasters are replicated to three channels.
    """
    with open(path, "rb") as f:
        magic = f.readline().strip()
        if magic == b"PF":
            channels = 3
        elif magic == b"Pf":
            channels = 1
        else:
            raise CorruptHeader(f"bad PFM magic: {magic!r}")
        try:
            width, height = map(int, f.readline().split())
            scale = float(f.readline())
        except ValueError as exc:
            raise CorruptHeader("bad PFM dimensions or scale line") from exc
        if width <= 0 or height <= 0 or scale == 0:
            raise CorruptHeader("non-positive PFM dimensions or zero scale")
        count = width * height * channels
        raw = f.read(count * 4)
    if len(raw) != count * 4:
        raise TruncatedPayload("PFM payload shorter than header promises")
    dtype = "<f4" if scale < 0 else ">f4"
    data = np.frombuffer(raw, dtype=dtype).astype(np.float64)
    data = data.reshape(height, width, channels)[::-1]  # rows are bottom-up
    if abs(scale) != 1.0:
        data = data * abs(scale)
    if channels == 1:
        data = np.repeat(data, 3, axis=2)
    return HdrImage(data)


def write_pfm(path, img: HdrImage, little_endian: bool = True) -> None:
    with open(path, "wb") as f:
        f.write(b"PF\n")
        f.write(f"{img.width} {img.height}\n".encode())
        f.write(b"-1.0\n" if little_endian else b"1.0\n")
        dtype = "<f4" if little_endian else ">f4"
        f.write(img.rgb[::-1].astype(dtype).tobytes())


def write_pfm_gray(path, data: np.ndarray, little_endian: bool = True) -> None:
    """Write a 2-D array as a grayscale PFM (used by filter dumps)."""
    data = np.asarray(data, dtype=np.float64)
    h, w = data.shape
    with open(path, "wb") as f:
        f.write(b"Pf\n")
        f.write(f"{w} {h}\n".encode())
        f.write(b"-1.0\n" if little_endian else b"1.0\n")
        dtype = "<f4" if little_endian else ">f4"
        f.write(data[::-1].astype(dtype).tobytes())


# ---------------------------------------------------------------------------
# Loading front end

def load_image(path, format: str = "auto") -> HdrImage:
    """Load an HDR file as a linear-light raster.

    ``format`` is one of {"rgbe", "pfm", "auto"}; auto sniffs the magic
    bytes and falls back to the file extension.
    """
    path = Path(path)
    if format == "rgbe":
        return read_hdr(path)
    if format == "pfm":
        return read_pfm(path)
    if format != "auto":
        raise UnsupportedFormat(f"unknown format {format!r}")
    with open(path, "rb") as f:
        head = f.read(10)
    if head.startswith(b"#?"):
        return read_hdr(path)
    if head.startswith((b"PF", b"Pf")):
        return read_pfm(path)
    raise UnsupportedFormat(f"cannot identify HDR format of {path}")


# ---------------------------------------------------------------------------
# Luminance

def to_luminance(
    img: HdrImage,
    coeffs=REC709_COEFFS,
    peak_scale: float | None = None,
) -> np.ndarray:
    """Weighted channel sum -> 2-D luminance map (cd/m^2).

    If ``peak_scale`` is given the raster is rescaled so its maximum equals
    that luminance.
    """
    coeffs = np.asarray(coeffs, dtype=np.float64)
    if coeffs.shape != (3,) or np.any(coeffs < 0):
        raise ValueError("coeffs must be three nonnegative floats")
    if coeffs.sum() <= 0:
        raise DegenerateCoefficients("all luminance coefficients are zero")
    lum = img.rgb @ coeffs
    if peak_scale is not None:
        if peak_scale <= 0:
            raise ValueError("peak_scale must be positive")
        peak = lum.max()
        if peak > 0:
            lum = lum * (peak_scale / peak)
    return lum
