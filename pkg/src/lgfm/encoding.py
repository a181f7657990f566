"""Perceptual encodings of absolute luminance.

Two encodings are provided: a perceptually-uniform (PU) mapping backed by
a bundled lookup table, and the SMPTE ST 2084 perceptual quantizer (PQ).
Both map cd/m^2 to dimensionless code values on a comparable numeric
scale (SDR white near code value 255).
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from importlib import resources

import numpy as np

from .errors import InvalidTable

PU_TABLE_ENV = "LGFM_PU_TABLE"

# ST 2084 constants
_PQ_M1 = 2610.0 / 16384.0
_PQ_M2 = 2523.0 / 4096.0 * 128.0
_PQ_C1 = 3424.0 / 4096.0
_PQ_C2 = 2413.0 / 4096.0 * 32.0
_PQ_C3 = 2392.0 / 4096.0 * 32.0

PQ_PEAK = 10000.0  # cd/m^2


@dataclass(frozen=True)
class PuTable:
    """Lookup table: PU code value vs log10 luminance.

    Both columns must be strictly increasing; lookups interpolate
    linearly in the log-luminance domain and clamp at the ends.
    """

    log_lum: np.ndarray
    pu: np.ndarray

    def __post_init__(self):
        log_lum = np.asarray(self.log_lum, dtype=np.float64)
        pu = np.asarray(self.pu, dtype=np.float64)
        if log_lum.ndim != 1 or log_lum.shape != pu.shape:
            raise InvalidTable("table columns must be 1-D and equal length")
        if len(log_lum) < 4:
            raise InvalidTable("too few table rows")
        if not (np.all(np.diff(log_lum) > 0) and np.all(np.diff(pu) > 0)):
            raise InvalidTable("table columns must be strictly increasing")
        object.__setattr__(self, "log_lum", log_lum)
        object.__setattr__(self, "pu", pu)

    @classmethod
    def from_csv(cls, path) -> "PuTable":
        data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
        if data.shape[1] != 2:
            raise InvalidTable(f"{path}: expected two columns")
        return cls(data[:, 0], data[:, 1])


_default_table: PuTable | None = None


def default_pu_table() -> PuTable:
    """Bundled PU table, overridable via the LGFM_PU_TABLE env var."""
    global _default_table
    override = os.environ.get(PU_TABLE_ENV)
    if override:
        return PuTable.from_csv(override)
    if _default_table is None:
        ref = resources.files("lgfm.data").joinpath("pu_table.csv")
        with resources.as_file(ref) as path:
            _default_table = PuTable.from_csv(path)
    return _default_table


def pu_encode(lum: np.ndarray, table: PuTable | None = None) -> np.ndarray:
    """Luminance (cd/m^2) -> PU code values.

    Luminance is clamped into the table domain, so zeros and super-peak
    values are handled without error.
    """
    if table is None:
        table = default_pu_table()
    lum = np.asarray(lum, dtype=np.float64)
    lo = 10.0 ** table.log_lum[0]
    hi = 10.0 ** table.log_lum[-1]
    x = np.log10(np.clip(lum, lo, hi))
    return np.interp(x, table.log_lum, table.pu)


def pq_encode(lum: np.ndarray, out_scale: float = 255.0) -> np.ndarray:
    """Luminance (cd/m^2) -> scaled ST 2084 code values.

    The inverse EOTF maps [0, 10000] cd/m^2 to [~0, 1]; the result is
    multiplied by ``out_scale`` (default 255 so code values are on the
    same numeric footing as PU).
    """
    lum = np.asarray(lum, dtype=np.float64)
    y = np.clip(lum, 0.0, PQ_PEAK) / PQ_PEAK
    yn = y**_PQ_M1
    v = ((_PQ_C1 + _PQ_C2 * yn) / (1.0 + _PQ_C3 * yn)) ** _PQ_M2
    return v * out_scale
