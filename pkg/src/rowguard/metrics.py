"""Evaluation metrics: inlier relative error, detection precision/recall,
subspace angle between top-k column spaces."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .matcore import as_matrix, frobenius_norm, largest_principal_angle
from .rsvd import best_rank_k_oracle


@dataclass
class EvalRecord:
    rel_error: float
    subspace_angle_deg: float
    precision: float
    recall: float
    n_retained: int
    runtime_ms: float


def inlier_relative_error(B, B_tilde, mask) -> float:
    """Frobenius error ratio restricted to rows where mask is False."""
    B = as_matrix(B)
    B_tilde = as_matrix(B_tilde, "approximation")
    mask = np.asarray(mask, dtype=bool).ravel()
    if B.shape != B_tilde.shape:
        raise ValueError(f"shape mismatch: {B.shape} vs {B_tilde.shape}")
    if mask.size != B.shape[0]:
        raise ValueError("mask length must equal the row count")
    inliers = ~mask
    if not inliers.any():
        raise ValueError("need at least one inlier row")
    denom = frobenius_norm(B[inliers])
    if denom == 0.0:
        raise ValueError("inlier block of the reference matrix is zero")
    return frobenius_norm(B[inliers] - B_tilde[inliers]) / denom


def precision_recall(mask_true, discarded) -> tuple[float, float]:
    """Detection precision/recall of the discarded set against the true mask.

    Empty discarded set -> precision 1.0; no true outliers -> recall 1.0.
    """
    mask = np.asarray(mask_true, dtype=bool).ravel()
    disc = np.asarray(discarded, dtype=np.int64).ravel()
    if disc.size and (disc.min() < 0 or disc.max() >= mask.size):
        raise ValueError("discarded indices out of range")
    true_out = int(mask.sum())
    hits = int(mask[disc].sum()) if disc.size else 0
    precision = hits / disc.size if disc.size else 1.0
    recall = hits / true_out if true_out else 1.0
    return precision, recall


def subspace_error(B_clean, B_tilde_clean, k: int) -> float:
    """Largest principal angle (degrees) between the top-k left singular
    subspaces of the two row-restricted matrices."""
    left = best_rank_k_oracle(B_clean, k)
    right = best_rank_k_oracle(B_tilde_clean, k)
    for approx, name in ((left, "reference"), (right, "approximation")):
        s = approx.sigma
        if s[k - 1] <= s[0] * 1e-12:
            raise ValueError(f"{name} matrix has rank below k={k}")
    return largest_principal_angle(left.U, right.U)
