"""Local frequency features: odd log-Gabor edge extraction and the
over-exposure weighting mask.

The filter bank defaults to two orientations (horizontal and vertical
edges); responses are combined into a single nonnegative edge-magnitude
map.  The exposure mask boosts regions whose perceptual code value sits
near the bright-region center ``mu``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import pi

import numpy as np
from scipy import ndimage

from .errors import DimensionMismatch, ImageTooSmall


@dataclass(frozen=True)
class GaborParams:
    f: float = 2.5  # cycles per kernel half-width unit pair ([-1, 1] span)
    sigma_x: float = 0.55
    sigma_y: float = 0.55
    kernel_size: int = 15
    orientations: tuple = (0.0, pi / 2)

    def __post_init__(self):
        if self.kernel_size < 3 or self.kernel_size % 2 == 0:
            raise ValueError("kernel_size must be odd and >= 3")
        if self.f <= 0 or self.sigma_x <= 0 or self.sigma_y <= 0:
            raise ValueError("f, sigma_x, sigma_y must be positive")
        if len(self.orientations) == 0:
            raise ValueError("need at least one orientation")
        object.__setattr__(self, "orientations", tuple(self.orientations))


@dataclass(frozen=True)
class ExposureMaskParams:
    sigma: float = 0.2
    mu: float = 250.0

    def __post_init__(self):
        if self.sigma <= 0:
            raise ValueError("sigma must be positive")


def make_log_gabor_kernel(p: GaborParams, theta: float) -> np.ndarray:
    """Sample the odd log-Gabor kernel on an integer grid.

    Grid coordinates are normalized to [-1, 1] across the kernel, so
    ``p.f`` counts carrier cycles per kernel width.  The log envelope is
    taken on |x'| and |y'| (even in both rotated coordinates) and the
    kernel is defined as 0 where either rotated coordinate vanishes,
    which is the limit of the envelope.  Coefficients are mean-subtracted
    so a constant image produces zero response.
    """
    half = (p.kernel_size - 1) / 2.0
    c = (np.arange(p.kernel_size) - half) / half
    x, y = np.meshgrid(c, c)  # x varies along columns, y along rows
    xr = x * np.cos(theta) + y * np.sin(theta)
    yr = y * np.cos(theta) - x * np.sin(theta)
    with np.errstate(divide="ignore"):
        lx = np.log(np.abs(xr) / p.sigma_x)
        ly = np.log(np.abs(yr) / p.sigma_y)
    envelope = np.where(
        (xr == 0) | (yr == 0),
        0.0,
        np.exp(-0.5 * (lx**2 + ly**2)) / (2 * pi * p.sigma_x * p.sigma_y),
    )
    kernel = envelope * np.sin(2 * pi * p.f * xr)
    return kernel - kernel.mean()


def extract_local_features(
    perceptual: np.ndarray, p: GaborParams = GaborParams()
) -> np.ndarray:
    """Edge-magnitude map: root-sum-square of per-orientation responses.

    Same-size convolution with mirror (symmetric) border padding.
    """
    img = np.asarray(perceptual, dtype=np.float64)
    if img.shape[0] < p.kernel_size or img.shape[1] < p.kernel_size:
        raise ImageTooSmall(
            f"image {img.shape} smaller than kernel size {p.kernel_size}"
        )
    acc = np.zeros_like(img)
    for theta in p.orientations:
        kernel = make_log_gabor_kernel(p, theta)
        resp = ndimage.convolve(img, kernel, mode="reflect")
        acc += resp**2
    return np.sqrt(acc)


def make_exposure_mask(
    perceptual_ref: np.ndarray, p: ExposureMaskParams = ExposureMaskParams()
) -> np.ndarray:
    """Gaussian bump of height 1/(2*pi*sigma) on a unit pedestal,
    centered where the reference code value equals ``mu``."""
    ref = np.asarray(perceptual_ref, dtype=np.float64)
    return 1.0 + np.exp(-((ref - p.mu) ** 2) / (2 * p.sigma**2)) / (
        2 * pi * p.sigma
    )


def apply_exposure_mask(features: np.ndarray, mask: np.ndarray) -> np.ndarray:
    features = np.asarray(features, dtype=np.float64)
    mask = np.asarray(mask, dtype=np.float64)
    if features.shape != mask.shape:
        raise DimensionMismatch(
            f"feature map {features.shape} vs mask {mask.shape}"
        )
    return features * mask
