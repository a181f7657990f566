#!/usr/bin/env python3
"""Regenerate the bundled perceptually-uniform luminance lookup table.

The code-value curve is the cumulative integral of 1/threshold over
luminance, where the detection threshold follows the classic two-branch
(rod/cone) threshold-vs-intensity model of Ferwerda et al. (1996).  The
result is affinely normalized so that a standard SDR display range maps
onto 8-bit code values: PU(0.1 cd/m^2) = 0 and PU(80 cd/m^2) = 255.

Usage: python scripts/gen_pu_table.py [out.csv]
"""

import sys
from pathlib import Path

import numpy as np

LOG_MIN, LOG_MAX = -5.0, 8.0  # log10 cd/m^2
FINE_STEP = 0.005
KNOT_STEP = 0.025


def log_threshold_cones(x):
    return np.where(
        x < -2.6,
        -0.72,
        np.where(
            x >= 1.9,
            x - 1.255,
            np.maximum(0.249 * x + 0.65, 0.0) ** 2.7 - 0.72,
        ),
    )


def log_threshold_rods(x):
    return np.where(
        x < -3.94,
        -2.86,
        np.where(
            x >= -1.44,
            x - 0.395,
            np.maximum(0.405 * x + 1.6, 0.0) ** 2.18 - 2.86,
        ),
    )


def build_table():
    x = np.arange(LOG_MIN, LOG_MAX + FINE_STEP / 2, FINE_STEP)
    threshold = np.minimum(
        10.0 ** log_threshold_cones(x), 10.0 ** log_threshold_rods(x)
    )
    # dPU/dx = L(x)·ln10 / threshold(L(x)) with x = log10 L
    integrand = 10.0**x * np.log(10.0) / threshold
    raw = np.concatenate(
        ([0.0], np.cumsum((integrand[1:] + integrand[:-1]) / 2.0 * FINE_STEP))
    )
    lo = np.interp(-1.0, x, raw)  # 0.1 cd/m^2
    hi = np.interp(np.log10(80.0), x, raw)
    pu = (raw - lo) * (255.0 / (hi - lo))
    stride = round(KNOT_STEP / FINE_STEP)
    return x[::stride], pu[::stride]


def main():
    out = Path(sys.argv[1] if len(sys.argv) > 1 else
               Path(__file__).resolve().parents[1] / "src/lgfm/data/pu_table.csv")
    x, pu = build_table()
    out.parent.mkdir(parents=True, exist_ok=True)
    with open(out, "w") as f:
        f.write("log10_luminance,pu_value\n")
        for xi, pi in zip(x, pu):
            f.write(f"{xi:.6f},{pi:.9g}\n")
    print(f"wrote {len(x)} knots to {out}")


if __name__ == "__main__":
    main()
