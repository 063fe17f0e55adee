"""Robust location/scale estimates and the screening threshold.

The scale cascade is: scaled MAD first; if that degenerates to zero, a
trimmed interquartile range of the absolute deviations (the largest 10% of
deviations are dropped before taking Q75 - Q25); if that is still zero the
sample is treated as effectively constant.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

MAD_SCALE = 1.4826  # makes the MAD a consistent sigma estimate under normality


class ScaleEstimator(enum.Enum):
    MAD = "mad"
    TRIMMED_IQR = "trimmed_iqr"
    DEGENERATE_ALL_EQUAL = "degenerate_all_equal"


@dataclass
class RobustEstimates:
    mu_hat: float
    sigma_hat: float
    estimator_used: ScaleEstimator


@dataclass
class Threshold:
    tau: float
    c: float


def _checked(values) -> np.ndarray:
    v = np.asarray(values, dtype=np.float64).ravel()
    if v.size == 0:
        raise ValueError("need at least one value")
    if not np.isfinite(v).all():
        raise ValueError("values must all be finite")
    return v


def median(values) -> float:
    """Sample median: middle of the sorted values, mean of the middle pair
    for even length."""
    v = np.sort(_checked(values))
    n = v.size
    if n % 2 == 1:
        return float(v[n // 2])
    return float((v[n // 2 - 1] + v[n // 2]) / 2.0)


def mad_scaled(values, mu: float) -> float:
    """1.4826 times the median absolute deviation from mu."""
    v = _checked(values)
    return MAD_SCALE * median(np.abs(v - mu))


def trimmed_iqr_scale(values, mu: float) -> float:
    """IQR of absolute deviations after dropping the largest 10% of them.

    Percentiles use inclusive linear interpolation (p-th percentile at rank
    1 + p*(n-1)).  Requires at least 4 values.
    """
    v = _checked(values)
    if v.size < 4:
        raise ValueError("trimmed IQR needs at least 4 values")
    dev = np.sort(np.abs(v - mu))
    drop = math.ceil(0.1 * dev.size)
    kept = dev[: dev.size - drop]
    q25, q75 = np.percentile(kept, [25.0, 75.0])
    return float(q75 - q25)


def robust_estimates(values) -> RobustEstimates:
    """Median plus the MAD -> trimmed-IQR -> all-equal scale cascade."""
    v = _checked(values)
    mu = median(v)
    sigma = mad_scaled(v, mu)
    used = ScaleEstimator.MAD
    if sigma == 0.0:
        if v.size >= 4:
            sigma = trimmed_iqr_scale(v, mu)
            used = ScaleEstimator.TRIMMED_IQR
        if sigma == 0.0:
            used = ScaleEstimator.DEGENERATE_ALL_EQUAL
    return RobustEstimates(mu_hat=mu, sigma_hat=sigma, estimator_used=used)


def compute_threshold(est: RobustEstimates, c: float) -> Threshold:
    """tau = mu_hat + c * sigma_hat.  In the all-equal degenerate case
    sigma_hat is 0, so tau collapses to mu_hat."""
    if c <= 0:
        raise ValueError("threshold constant c must be positive")
    return Threshold(tau=est.mu_hat + c * est.sigma_hat, c=c)
