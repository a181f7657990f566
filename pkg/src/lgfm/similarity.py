"""Similarity measurement and pooling: per-pixel similarity maps for the
local and global features, salience weight maps, weighted-average
pooling, and the final quality score."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch
from .global_features import GlobalFeature

MODES = ("full", "local_only", "global_only")
PAIRINGS = ("matched", "literal")


@dataclass(frozen=True)
class SimilarityParams:
    t0: float = 0.014  # local-feature stabilizer
    t1: float = 8.0  # frequency-map stabilizer
    t2: float = 1.0  # phase-map stabilizer
    alpha: float = 0.5  # frequency/phase blend exponent

    def __post_init__(self):
        if min(self.t0, self.t1, self.t2) <= 0:
            raise ValueError("stabilizers must be positive")
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError("alpha must be in [0, 1]")


@dataclass(frozen=True)
class QualityScore:
    q_local: float | None
    q_global: float | None
    q_lgfm: float


def _check_shapes(a: np.ndarray, b: np.ndarray) -> None:
    if a.shape != b.shape:
        raise DimensionMismatch(f"{a.shape} vs {b.shape}")


def similarity_map(a: np.ndarray, b: np.ndarray, t: float) -> np.ndarray:
    """Pointwise (2ab + t) / (a^2 + b^2 + t); equals 1 iff a == b."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    _check_shapes(a, b)
    if t <= 0:
        raise ValueError("stabilizer must be positive")
    return (2.0 * a * b + t) / (a**2 + b**2 + t)


def combine_global(
    s_freq: np.ndarray, s_phase: np.ndarray, alpha: float
) -> np.ndarray:
    """Geometric blend s_freq^alpha * s_phase^(1-alpha).

    Negative similarities (possible when phase values of opposite sign
    are compared) are clamped to 0 before the fractional powers.
    """
    s_freq = np.asarray(s_freq, dtype=np.float64)
    s_phase = np.asarray(s_phase, dtype=np.float64)
    _check_shapes(s_freq, s_phase)
    return np.maximum(s_freq, 0.0) ** alpha * np.maximum(s_phase, 0.0) ** (
        1.0 - alpha
    )


def make_weight_map(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Pointwise max(|a|, |b|): salience of the feature pair."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    _check_shapes(a, b)
    return np.maximum(np.abs(a), np.abs(b))


def pool(similarity: np.ndarray, weights: np.ndarray) -> float:
    """Weighted average of a similarity map.

    Falls back to the unweighted mean when all weights are zero (blank
    image pairs).  Summation order is fixed (C-order np.sum), so results
    are bit-reproducible.
    """
    similarity = np.asarray(similarity, dtype=np.float64)
    weights = np.asarray(weights, dtype=np.float64)
    _check_shapes(similarity, weights)
    if np.any(weights < 0):
        raise ValueError("weights must be nonnegative")
    total = float(np.sum(weights))
    if total == 0.0:
        return float(np.mean(similarity))
    return float(np.sum(weights * similarity) / total)


def lgfm_score(
    local_ref: np.ndarray,
    local_dist: np.ndarray,
    global_ref: GlobalFeature,
    global_dist: GlobalFeature,
    p: SimilarityParams = SimilarityParams(),
    mode: str = "full",
    pairing: str = "matched",
) -> QualityScore:
    """Pooled quality score from extracted feature pairs.

    ``pairing`` selects which salience weights pool which similarity
    map: "matched" pools each similarity with weights from its own
    feature domain; "literal" swaps them (Gabor weights pool the global
    similarity and vice versa).  ``mode`` picks the full product or one
    of the two ablation scores.
    """
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    if pairing not in PAIRINGS:
        raise ValueError(f"pairing must be one of {PAIRINGS}")

    s_local = similarity_map(local_ref, local_dist, p.t0)
    s_freq = similarity_map(global_ref.freq_map, global_dist.freq_map, p.t1)
    s_phase = similarity_map(global_ref.phase_map, global_dist.phase_map, p.t2)
    s_global = combine_global(s_freq, s_phase, p.alpha)

    w_gabor = make_weight_map(local_ref, local_dist)
    w_freq = make_weight_map(global_ref.freq_map, global_dist.freq_map)
    if pairing == "matched":
        w_local, w_global = w_gabor, w_freq
    else:
        w_local, w_global = w_freq, w_gabor

    q_local = pool(s_local, w_local) if mode != "global_only" else None
    q_global = pool(s_global, w_global) if mode != "local_only" else None

    if mode == "full":
        q = q_local * q_global
    elif mode == "local_only":
        q = q_local
    else:
        q = q_global
    return QualityScore(q_local=q_local, q_global=q_global, q_lgfm=q)
