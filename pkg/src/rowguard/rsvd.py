"""Randomized rank-k factorization via a Gaussian range finder.

Single-pass Halko-style scheme: sample a Gaussian test matrix, form the
sample matrix Y, orthonormalize it, project, and take the small SVD.  No
power iterations.  The test matrix comes from the stream (seed, "omega"), so
the factorization is a pure function of (input, config).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .matcore import as_matrix, householder_qr, matmul, thin_svd
from .rng import RandomStream


@dataclass
class RsvdConfig:
    k: int
    p: int = 10  # oversampling columns
    seed: int = 0

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("target rank k must be at least 1")
        if self.p < 0:
            raise ValueError("oversampling p must be nonnegative")


@dataclass
class RankKApprox:
    U: np.ndarray  # rows x k, orthonormal columns
    sigma: np.ndarray  # nonincreasing, length k
    V: np.ndarray  # cols x k, orthonormal columns
    k_clamped: bool = field(default=False)


def randomized_rank_k(Ahat, cfg: RsvdConfig) -> RankKApprox:
    """Rank-k approximation of Ahat.

    The sketch width is min(k + p, rows, cols); if that is smaller than k,
    k is clamped down to it and the result is flagged.
    """
    Ahat = as_matrix(Ahat)
    m, n = Ahat.shape
    ell = min(cfg.k + cfg.p, m, n)
    k = min(cfg.k, ell)
    clamped = k < cfg.k

    omega = RandomStream(cfg.seed, "omega").standard_normals(n * ell).reshape(n, ell)
    Y = matmul(Ahat, omega)
    Q, _ = householder_qr(Y)
    small = matmul(Q.T, Ahat)
    svd = thin_svd(small)
    U = matmul(Q, svd.U[:, :k])
    return RankKApprox(
        U=U,
        sigma=svd.singular_values[:k].copy(),
        V=svd.V[:, :k].copy(),
        k_clamped=clamped,
    )


def reconstruct(approx: RankKApprox) -> np.ndarray:
    """U diag(sigma) V^T."""
    return matmul(approx.U * approx.sigma[np.newaxis, :], approx.V.T)


def best_rank_k_oracle(A, k: int) -> RankKApprox:
    """Exact best rank-k approximation (truncated thin SVD)."""
    A = as_matrix(A)
    if not 1 <= k <= min(A.shape):
        raise ValueError(f"k={k} out of range for shape {A.shape}")
    svd = thin_svd(A)
    return RankKApprox(
        U=svd.U[:, :k].copy(),
        sigma=svd.singular_values[:k].copy(),
        V=svd.V[:, :k].copy(),
        k_clamped=False,
    )
