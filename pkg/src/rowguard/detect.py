"""Row screening: projected norms, robust threshold, retained/discarded split.

Rows whose sketched norm is strictly above tau = mu_hat + c * sigma_hat are
discarded; ties are retained.  Estimates are computed over all rows (the
screen cannot know which rows are clean).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .matcore import all_row_norms, as_matrix
from .robstats import RobustEstimates, Threshold, compute_threshold, robust_estimates


class AllRowsDiscardedError(RuntimeError):
    """Every row exceeded the threshold; nothing is left to approximate."""


@dataclass
class DetectionResult:
    row_norms: np.ndarray
    estimates: RobustEstimates
    threshold: Threshold
    retained: np.ndarray  # sorted row indices, norm <= tau
    discarded: np.ndarray  # sorted row indices, norm > tau


def detect_outliers(S, c: float) -> DetectionResult:
    """Partition rows of the sketch by the robust norm threshold."""
    S = as_matrix(S, "sketch")
    m = S.shape[0]
    if m < 2:
        raise ValueError("outlier screening needs at least 2 rows")
    norms = all_row_norms(S)
    est = robust_estimates(norms)
    thr = compute_threshold(est, c)
    keep = norms <= thr.tau
    retained = np.flatnonzero(keep)
    if retained.size == 0:
        raise AllRowsDiscardedError(
            f"all {m} rows exceed tau={thr.tau:.6g}; "
            "check the threshold constant c or the input scale"
        )
    return DetectionResult(
        row_norms=norms,
        estimates=est,
        threshold=thr,
        retained=retained,
        discarded=np.flatnonzero(~keep),
    )


def check_separation(max_clean_norm: float, delta_gap: float, epsilon: float, tau: float) -> bool:
    """True when (1 - epsilon) * (max_clean_norm + delta_gap) > tau, the
    condition under which every adversarial row lands above the threshold."""
    if not 0.0 < epsilon < 1.0:
        raise ValueError(f"epsilon must be in (0,1), got {epsilon}")
    return (1.0 - epsilon) * (max_clean_norm + delta_gap) > tau
