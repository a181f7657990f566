from pathlib import Path

import numpy as np
import pytest
from scipy import ndimage

DATA_DIR = Path(__file__).parent / "data"


def synthetic_luminance_set(size=64, n=10, seed=7):
    """Diverse synthetic luminance rasters (cd/m^2): gradients, periodic
    patterns, noise fields, smooth fields, checkers."""
    rng = np.random.default_rng(seed)
    h = w = size
    yy, xx = np.mgrid[0:h, 0:w].astype(np.float64)
    imgs = [
        10 + 990 * xx / (w - 1),
        10 + 990 * yy / (h - 1),
        5 + 500 * (xx + yy) / (2 * (w - 1)),
        300 + 250 * np.sin(2 * np.pi * xx / 8) * np.cos(2 * np.pi * yy / 11),
        rng.uniform(1, 500, (h, w)),
        rng.uniform(0.01, 5000, (h, w)),
        ndimage.gaussian_filter(rng.uniform(0, 1000, (h, w)), 3),
        ndimage.gaussian_filter(rng.uniform(0, 100, (h, w)), 1.5) + 0.5,
        np.where((xx // 8 + yy // 8) % 2 == 0, 30.0, 400.0),
        20 + 800 * np.exp(-((xx - w / 2) ** 2 + (yy - h / 2) ** 2) / 200.0),
    ]
    return imgs[:n]


@pytest.fixture
def sample_hdr_path():
    return DATA_DIR / "sample.hdr"
