"""End-to-end scoring pipeline and run configuration.

RunConfig gathers every tunable of the pipeline; `resolve_config` merges
built-in defaults, a JSON config file, and explicit overrides (in
increasing precedence) and the resolved result is embedded in every
report for reproducibility.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass, field, replace

import numpy as np

from . import hdr_io
from .encoding import PuTable, default_pu_table, pq_encode, pu_encode
from .errors import DimensionMismatch
from .global_features import ButterworthParams, extract_global_feature
from .local_features import (
    ExposureMaskParams,
    GaborParams,
    apply_exposure_mask,
    extract_local_features,
    make_exposure_mask,
)
from .similarity import MODES, PAIRINGS, QualityScore, SimilarityParams, lgfm_score

ENCODINGS = ("pu", "pq")


@dataclass(frozen=True)
class RunConfig:
    encoding: str = "pu"
    mode: str = "full"
    pairing: str = "matched"
    use_mg: bool = True
    use_mb: bool = True
    luminance_coeffs: tuple = hdr_io.REC709_COEFFS
    peak_scale: float | None = None
    pq_out_scale: float = 255.0
    pu_table: str | None = None  # CSV path; None = bundled table
    gabor: GaborParams = field(default_factory=GaborParams)
    exposure_mask: ExposureMaskParams = field(default_factory=ExposureMaskParams)
    butterworth: ButterworthParams = field(default_factory=ButterworthParams)
    similarity: SimilarityParams = field(default_factory=SimilarityParams)
    format: str = "json"
    threads: int = 1

    def __post_init__(self):
        if self.encoding not in ENCODINGS:
            raise ValueError(f"encoding must be one of {ENCODINGS}")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")
        if self.pairing not in PAIRINGS:
            raise ValueError(f"pairing must be one of {PAIRINGS}")
        if self.threads < 1:
            raise ValueError("threads must be >= 1")
        object.__setattr__(self, "luminance_coeffs", tuple(self.luminance_coeffs))

    def to_dict(self) -> dict:
        """Scoring-relevant parameters only; execution settings (threads,
        output format) are excluded so reports and hashes are invariant
        to how a run was executed."""
        d = asdict(self)
        d["gabor"]["orientations"] = list(self.gabor.orientations)
        d["luminance_coeffs"] = list(self.luminance_coeffs)
        del d["threads"]
        del d["format"]
        return d

    def param_hash(self) -> str:
        blob = json.dumps(self.to_dict(), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:16]


_SECTION_TYPES = {
    "gabor": GaborParams,
    "exposure_mask": ExposureMaskParams,
    "butterworth": ButterworthParams,
    "similarity": SimilarityParams,
}


def config_from_dict(data: dict, base: RunConfig | None = None) -> RunConfig:
    """Build a RunConfig from a (possibly partial) nested dict."""
    cfg = base or RunConfig()
    kwargs = {}
    for key, value in data.items():
        if key in _SECTION_TYPES:
            current = asdict(getattr(cfg, key))
            current.update(value)
            if key == "gabor":
                current["orientations"] = tuple(current["orientations"])
            kwargs[key] = _SECTION_TYPES[key](**current)
        else:
            kwargs[key] = value
    return replace(cfg, **kwargs)


def resolve_config(
    config_path=None, overrides: dict | None = None
) -> RunConfig:
    """defaults < config file < explicit overrides."""
    cfg = RunConfig()
    if config_path is not None:
        with open(config_path) as f:
            cfg = config_from_dict(json.load(f), cfg)
    if overrides:
        cfg = config_from_dict(
            {k: v for k, v in overrides.items() if v is not None}, cfg
        )
    return cfg


def encode_luminance(
    lum: np.ndarray, cfg: RunConfig, pu_table: PuTable | None = None
) -> np.ndarray:
    if cfg.encoding == "pu":
        if pu_table is None:
            pu_table = (
                PuTable.from_csv(cfg.pu_table) if cfg.pu_table
                else default_pu_table()
            )
        return pu_encode(lum, pu_table)
    return pq_encode(lum, cfg.pq_out_scale)


def score_perceptual_maps(
    ref: np.ndarray, dist: np.ndarray, cfg: RunConfig
) -> QualityScore:
    """Score a pair of perceptually-encoded luminance maps."""
    ref = np.asarray(ref, dtype=np.float64)
    dist = np.asarray(dist, dtype=np.float64)
    if ref.shape != dist.shape:
        raise DimensionMismatch(f"{ref.shape} vs {dist.shape}")

    g_ref = extract_local_features(ref, cfg.gabor)
    g_dist = extract_local_features(dist, cfg.gabor)
    if cfg.use_mg:
        mask = make_exposure_mask(ref, cfg.exposure_mask)
        g_ref = apply_exposure_mask(g_ref, mask)
        g_dist = apply_exposure_mask(g_dist, mask)

    b_ref = extract_global_feature(ref, cfg.butterworth, use_mask=cfg.use_mb)
    b_dist = extract_global_feature(dist, cfg.butterworth, use_mask=cfg.use_mb)

    return lgfm_score(
        g_ref, g_dist, b_ref, b_dist,
        p=cfg.similarity, mode=cfg.mode, pairing=cfg.pairing,
    )


def score_luminance(
    ref_lum: np.ndarray,
    dist_lum: np.ndarray,
    cfg: RunConfig,
    pu_table: PuTable | None = None,
) -> QualityScore:
    """Score a pair of absolute-luminance maps (cd/m^2)."""
    return score_perceptual_maps(
        encode_luminance(np.asarray(ref_lum, np.float64), cfg, pu_table),
        encode_luminance(np.asarray(dist_lum, np.float64), cfg, pu_table),
        cfg,
    )


def score_images(
    ref: hdr_io.HdrImage, dist: hdr_io.HdrImage, cfg: RunConfig
) -> QualityScore:
    if (ref.height, ref.width) != (dist.height, dist.width):
        raise DimensionMismatch(
            f"{ref.width}x{ref.height} vs {dist.width}x{dist.height}"
        )
    lum_r = hdr_io.to_luminance(ref, cfg.luminance_coeffs, cfg.peak_scale)
    lum_d = hdr_io.to_luminance(dist, cfg.luminance_coeffs, cfg.peak_scale)
    return score_luminance(lum_r, lum_d, cfg)


def score_files(ref_path, dist_path, cfg: RunConfig) -> QualityScore:
    ref = hdr_io.load_image(ref_path)
    dist = hdr_io.load_image(dist_path)
    return score_images(ref, dist, cfg)
