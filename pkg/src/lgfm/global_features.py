"""Global frequency features: center-shifted DFT, bandpass Butterworth
weighting mask, masked log-magnitude map, and phase map."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class ButterworthParams:
    d1: float = 400.0  # high cutoff radius, frequency-grid pixels
    d2: float = 100.0  # low cutoff radius
    n1: int = 4
    n2: int = 2
    # Rescale d1/d2 by (image diagonal / 1080); off by default because the
    # printed cutoffs are absolute bin radii.
    normalize_radii: bool = False

    def __post_init__(self):
        if not (self.d1 > self.d2 > 0):
            raise ValueError("need d1 > d2 > 0")
        if self.n1 < 1 or self.n2 < 1:
            raise ValueError("orders must be >= 1")


@dataclass(frozen=True)
class GlobalFeature:
    """Masked log-magnitude map plus phase map of a shifted spectrum."""

    freq_map: np.ndarray  # >= 0
    phase_map: np.ndarray  # in (-pi, pi]


def dft2(perceptual: np.ndarray) -> np.ndarray:
    """Unnormalized forward 2-D DFT, low frequencies shifted to the
    array center."""
    return np.fft.fftshift(np.fft.fft2(np.asarray(perceptual, np.float64)))


def make_butterworth_mask(
    height: int, width: int, p: ButterworthParams = ButterworthParams()
) -> np.ndarray:
    """Bandpass weight over a shifted frequency grid.

    Distance is Euclidean in bin units from the center bin
    (floor(h/2), floor(w/2)); the mask is 0 at the center (DC blocked,
    the analytic limit of the high-pass factor).
    """
    d1, d2 = p.d1, p.d2
    if p.normalize_radii:
        scale = np.hypot(width, height) / 1080.0
        d1, d2 = d1 * scale, d2 * scale
    v = np.arange(height) - height // 2
    u = np.arange(width) - width // 2
    d = np.hypot(v[:, None], u[None, :])
    with np.errstate(divide="ignore"):
        highpass = 1.0 - 1.0 / (1.0 + (d1 / d) ** (2 * p.n1))
        lowpass = 1.0 / (1.0 + (d2 / d) ** (2 * p.n2))
    mask = highpass * lowpass
    mask[d == 0] = 0.0
    return mask


def extract_global_feature(
    perceptual: np.ndarray,
    p: ButterworthParams = ButterworthParams(),
    use_mask: bool = True,
) -> GlobalFeature:
    """Masked log-magnitude and phase of the shifted spectrum.

    The log is natural; ``use_mask=False`` skips the Butterworth weight
    (ablation mode).  Phase comes from the full-quadrant arctangent, so
    it is defined even where the real part vanishes.
    """
    spectrum = dft2(perceptual)
    freq = np.log(np.abs(spectrum) + 1.0)
    if use_mask:
        freq = freq * make_butterworth_mask(*spectrum.shape, p)
    return GlobalFeature(freq_map=freq, phase_map=np.angle(spectrum))
