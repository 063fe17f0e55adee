"""Dense matrix kernels with pinned floating-point semantics.

Matrices are plain 2-D float64 ndarrays in row-major (C) order.  The kernels
here trade raw speed for reproducibility: every reduction happens in a fixed
order, so results are bit-identical across runs and thread counts.

* ``matmul`` accumulates over the inner dimension in ascending index order
  (one rank-1 update per inner index), matching a naive triple loop bitwise.
* ``frobenius_norm`` / ``row_norm`` sum squares left to right (via cumsum),
  matching a sequential scalar loop bitwise.
* ``householder_qr`` is a hand-rolled thin Householder factorization using
  only elementwise ufuncs; no BLAS is involved.
* ``thin_svd`` delegates to LAPACK but pins the BLAS thread pool to one
  thread on first use, so the bidiagonalization is run sequentially and the
  output never depends on ambient parallelism.

Sign conventions (R diagonal nonnegative; largest-magnitude entry of each
right-singular-vector column nonnegative) make the factorizations unique, so
golden tests can compare factors directly.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass

import numpy as np

_blas_pinned = False
_pin_lock = threading.Lock()


def _pin_blas_single_thread():
    global _blas_pinned
    if _blas_pinned:
        return
    with _pin_lock:
        if not _blas_pinned:
            from threadpoolctl import ThreadpoolController

            ThreadpoolController().limit(limits=1, user_api="blas")
            _blas_pinned = True


def as_matrix(a, name: str = "matrix") -> np.ndarray:
    """Validate and return a 2-D finite float64 C-order array."""
    m = np.ascontiguousarray(a, dtype=np.float64)
    if m.ndim != 2:
        raise ValueError(f"{name} must be 2-D, got ndim={m.ndim}")
    if m.shape[0] < 1 or m.shape[1] < 1:
        raise ValueError(f"{name} must have at least one row and one column")
    if not np.isfinite(m).all():
        raise ValueError(f"{name} contains non-finite entries")
    return m


def frobenius_norm(M) -> float:
    """sqrt of the sum of squared entries, summed in row-major order."""
    M = as_matrix(M)
    sq = np.cumsum(np.square(M.ravel()))
    return float(np.sqrt(sq[-1]))


def row_norm(M, i: int) -> float:
    """Euclidean norm of row i (left-to-right accumulation)."""
    M = as_matrix(M)
    if not 0 <= i < M.shape[0]:
        raise ValueError(f"row index {i} out of range for {M.shape[0]} rows")
    sq = np.cumsum(np.square(M[i]))
    return float(np.sqrt(sq[-1]))


def all_row_norms(M) -> np.ndarray:
    """Euclidean norms of every row; row i matches row_norm(M, i) bitwise."""
    M = as_matrix(M)
    return np.sqrt(np.cumsum(np.square(M), axis=1)[:, -1])


def matmul(A, B) -> np.ndarray:
    """Matrix product with ascending-index accumulation over the inner dim.

    Bitwise identical to ``C[i,j] = sum_k A[i,k]*B[k,j]`` evaluated as a
    sequential loop over k, independent of threading or BLAS configuration.
    """
    A = as_matrix(A, "left operand")
    B = as_matrix(B, "right operand")
    if A.shape[1] != B.shape[0]:
        raise ValueError(f"shape mismatch for product: {A.shape} x {B.shape}")
    C = np.zeros((A.shape[0], B.shape[1]))
    tmp = np.empty_like(C)
    for k in range(A.shape[1]):
        np.multiply(A[:, k, np.newaxis], B[k, np.newaxis, :], out=tmp)
        C += tmp
    return C


def householder_qr(M) -> tuple[np.ndarray, np.ndarray]:
    """Thin QR via Householder reflections, R diagonal made nonnegative.

    Requires rows >= cols.  Q is rows x cols with orthonormal columns, R is
    cols x cols upper triangular.  Uses only elementwise ufunc reductions,
    so the result is deterministic under any thread count.
    """
    M = as_matrix(M)
    m, n = M.shape
    if m < n:
        raise ValueError(f"thin QR requires rows >= cols, got {m} x {n}")

    R = M.copy()
    reflectors = []
    for j in range(n):
        x = R[j:, j]
        sigma = float(np.sum(np.square(x)))
        if sigma == 0.0:
            reflectors.append(None)
            continue
        normx = np.sqrt(sigma)
        alpha = -normx if x[0] >= 0 else normx
        v = x.copy()
        v[0] -= alpha
        vsq = float(np.sum(np.square(v)))
        if vsq == 0.0:
            reflectors.append(None)
            continue
        beta = 2.0 / vsq
        w = np.sum(v[:, np.newaxis] * R[j:, j:], axis=0)
        R[j:, j:] -= beta * v[:, np.newaxis] * w[np.newaxis, :]
        R[j, j] = alpha
        R[j + 1:, j] = 0.0
        reflectors.append((j, v, beta))

    Q = np.zeros((m, n))
    Q[:n, :n] = np.eye(n)
    for item in reversed(reflectors):
        if item is None:
            continue
        j, v, beta = item
        w = np.sum(v[:, np.newaxis] * Q[j:, :], axis=0)
        Q[j:, :] -= beta * v[:, np.newaxis] * w[np.newaxis, :]

    R = np.ascontiguousarray(R[:n, :])
    flip = np.diag(R) < 0
    if flip.any():
        R[flip, :] *= -1.0
        Q[:, flip] *= -1.0
    return Q, R


@dataclass
class ThinSVD:
    """Thin singular value decomposition M = U diag(s) V^T."""

    U: np.ndarray
    singular_values: np.ndarray
    V: np.ndarray


def thin_svd(M) -> ThinSVD:
    """Thin SVD with a deterministic sign convention.

    For each singular triplet the entry of largest magnitude in the V column
    is made nonnegative (first index wins ties).  BLAS is pinned to a single
    thread, so identical input yields bit-identical factors.
    """
    M = as_matrix(M)
    _pin_blas_single_thread()
    U, s, Vt = np.linalg.svd(M, full_matrices=False)
    V = Vt.T.copy()
    for j in range(V.shape[1]):
        i = int(np.argmax(np.abs(V[:, j])))
        if V[i, j] < 0:
            V[:, j] *= -1.0
            U[:, j] *= -1.0
    return ThinSVD(U=np.ascontiguousarray(U), singular_values=s, V=V)


def _qr_rank(R: np.ndarray) -> int:
    diag = np.abs(np.diag(R))
    if diag.size == 0:
        return 0
    tol = diag.max() * max(R.shape) * np.finfo(np.float64).eps
    return int(np.count_nonzero(diag > tol))


def largest_principal_angle(U1, U2) -> float:
    """Largest principal angle between two column spaces, in degrees [0, 90].

    Columns of each input are orthonormalized internally, so any basis of a
    subspace (not necessarily orthonormal) is accepted.
    """
    U1 = as_matrix(U1, "first subspace")
    U2 = as_matrix(U2, "second subspace")
    if U1.shape[0] != U2.shape[0]:
        raise ValueError("subspace bases must have the same number of rows")
    if frobenius_norm(U1) == 0.0 or frobenius_norm(U2) == 0.0:
        raise ValueError("zero-rank input has no principal angles")
    Q1, R1 = householder_qr(U1)
    Q2, R2 = householder_qr(U2)
    r = min(_qr_rank(R1), _qr_rank(R2))
    if r == 0:
        raise ValueError("zero-rank input has no principal angles")
    G = matmul(Q1.T, Q2)
    s = thin_svd(G).singular_values
    cos_min = float(np.clip(s[r - 1], 0.0, 1.0))
    angle = float(np.degrees(np.arccos(cos_min)))
    return min(max(angle, 0.0), 90.0)
