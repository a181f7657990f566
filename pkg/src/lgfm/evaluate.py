"""Evaluation harness: 5-parameter logistic regression of objective
scores onto subjective scores, rank correlations (SROCC, KROCC), RMSE,
and a PU-PSNR sanity baseline."""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy import optimize, stats
from scipy.special import expit

from .errors import DegenerateInput, DimensionMismatch, LengthMismatch

PSNR_CAP_DB = 99.0


@dataclass(frozen=True)
class ScoreRecord:
    image_id: str
    q: float  # raw objective score
    mos: float  # subjective score (MOS or DMOS)


@dataclass(frozen=True)
class RegressionParams:
    gamma1: float
    gamma2: float
    gamma3: float
    gamma4: float
    gamma5: float

    def as_array(self) -> np.ndarray:
        return np.array(
            [self.gamma1, self.gamma2, self.gamma3, self.gamma4, self.gamma5]
        )


def logistic_map(q, g: RegressionParams):
    """g1*(1/2 - 1/(1 + exp(g2*(q - g3)))) + g4*q + g5.

    The sigmoid term is evaluated with expit, which saturates instead of
    overflowing for large |q|.
    """
    q = np.asarray(q, dtype=np.float64)
    sig = expit(-g.gamma2 * (q - g.gamma3))  # = 1/(1+exp(g2(q-g3)))
    out = g.gamma1 * (0.5 - sig) + g.gamma4 * q + g.gamma5
    return float(out) if out.ndim == 0 else out


def _residual_sse(params: np.ndarray, q: np.ndarray, mos: np.ndarray) -> float:
    g = RegressionParams(*params)
    r = logistic_map(q, g) - mos
    return float(np.dot(r, r))


def fit_logistic(
    records, trace: list | None = None
) -> RegressionParams:
    """Least-squares fit of the logistic mapping.

    Nelder-Mead from three starts (heuristic initialization, a perturbed
    copy, and a linear-regression-informed start), each followed by a
    Levenberg-Marquardt polish; the best optimum wins.  The extra start
    and the polish are needed because the model has a very flat
    gamma1/gamma2 ridge on near-linear data.  If ``trace`` is given, the
    per-iteration best-vertex objective values of each Nelder-Mead run
    are appended to it as separate lists.
    """
    records = list(records)
    if len(records) < 5:
        raise DegenerateInput("need at least 5 records")
    q = np.array([r.q for r in records], dtype=np.float64)
    mos = np.array([r.mos for r in records], dtype=np.float64)
    if not (np.all(np.isfinite(q)) and np.all(np.isfinite(mos))):
        raise DegenerateInput("non-finite score values")
    q_std = float(np.std(q))
    if q_std == 0.0:
        raise DegenerateInput("objective scores are constant")

    def residuals(params):
        return logistic_map(q, RegressionParams(*params)) - mos

    x0 = np.array(
        [
            float(np.max(mos) - np.min(mos)),
            1.0 / q_std,
            float(np.median(q)),
            0.0,
            float(np.mean(mos)),
        ]
    )
    slope, intercept = np.polyfit(q, mos, 1)
    linear_resid = mos - (slope * q + intercept)
    x1 = np.array(
        [float(np.ptp(linear_resid)), 1.0 / q_std, float(np.median(q)),
         float(slope), float(intercept)]
    )
    rng = np.random.default_rng(0)
    starts = [x0, x0 * (1 + 0.1 * rng.standard_normal(5)), x1]

    best_f, best_x = np.inf, x0
    for start in starts:
        run_trace: list[float] = []
        res = optimize.minimize(
            _residual_sse,
            start,
            args=(q, mos),
            method="Nelder-Mead",
            callback=lambda xk: run_trace.append(_residual_sse(xk, q, mos)),
            options={"xatol": 1e-10, "fatol": 1e-10, "maxfev": 100_000,
                     "maxiter": 100_000},
        )
        if trace is not None:
            trace.append(run_trace)
        polished = optimize.least_squares(
            residuals, res.x, method="lm", xtol=1e-15, ftol=1e-15, gtol=1e-15
        )
        for x in (res.x, polished.x):
            f = _residual_sse(x, q, mos)
            if f < best_f:
                best_f, best_x = f, x
    return RegressionParams(*best_x)


def _as_float_arrays(a, b):
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise LengthMismatch(f"{a.shape} vs {b.shape}")
    return a, b


def srocc(a, b) -> float:
    """Spearman rank correlation (mid-ranks for ties)."""
    a, b = _as_float_arrays(a, b)
    if len(a) < 3:
        raise DegenerateInput("need at least 3 samples")
    with warnings.catch_warnings():
        # constant input yields nan, which we surface as DegenerateInput
        warnings.simplefilter("ignore", stats.ConstantInputWarning)
        rho = stats.spearmanr(a, b).statistic
    if not np.isfinite(rho):
        raise DegenerateInput("zero rank variance")
    return float(rho)


def krocc(a, b) -> float:
    """Kendall tau-b (tie-corrected)."""
    a, b = _as_float_arrays(a, b)
    if len(a) < 3:
        raise DegenerateInput("need at least 3 samples")
    tau = stats.kendalltau(a, b).statistic
    if not np.isfinite(tau):
        raise DegenerateInput("all ties in one argument")
    return float(tau)


def rmse(mapped, mos) -> float:
    mapped, mos = _as_float_arrays(mapped, mos)
    return float(np.sqrt(np.mean((mapped - mos) ** 2)))


def pu_psnr(ref: np.ndarray, dist: np.ndarray, peak: float) -> float:
    """PSNR over perceptually-encoded maps, capped at 99 dB for
    identical inputs."""
    ref = np.asarray(ref, dtype=np.float64)
    dist = np.asarray(dist, dtype=np.float64)
    if ref.shape != dist.shape:
        raise DimensionMismatch(f"{ref.shape} vs {dist.shape}")
    if peak <= 0:
        raise ValueError("peak must be positive")
    mse = float(np.mean((ref - dist) ** 2))
    if mse == 0.0:
        return PSNR_CAP_DB
    return 10.0 * np.log10(peak**2 / mse)


def evaluate_dataset(records) -> dict:
    """Fit the logistic mapping and report correlations and RMSE."""
    records = list(records)
    g = fit_logistic(records)
    q = np.array([r.q for r in records])
    mos = np.array([r.mos for r in records])
    mapped = logistic_map(q, g)
    return {
        "gamma": list(g.as_array()),
        "srocc": srocc(q, mos),
        "krocc": krocc(q, mos),
        "rmse": rmse(mapped, mos),
        "n": len(records),
    }
