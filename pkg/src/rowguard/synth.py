"""Synthetic low-rank datasets with row-wise adversarial corruption.

Construction, all driven by per-purpose streams of a single seed:

* clean part: B = U V with U (m x k) and V (k x n) standard normal
  (streams "synth-U", "synth-V");
* outlier positions: first floor(alpha * m) entries of a Fisher-Yates
  shuffle of the row indices (stream "synth-mask");
* inlier rows: A_i = B_i + mag_i * dir_i with dir_i a random unit vector and
  mag_i uniform on [0, delta], so the row noise bound holds exactly
  (stream "synth-noise"; directions for all rows first, then magnitudes);
* adversarial rows: replaced entirely by a random unit direction scaled to
  norm max_clean + gap, where gap = outlier_scale * max_clean
  (stream "synth-adv", one direction per adversarial row in index order).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .matcore import all_row_norms, matmul
from .rng import RandomStream


@dataclass
class SynthParams:
    m: int
    n: int
    k: int
    alpha: float
    outlier_scale: float
    delta: float = 0.1
    seed: int = 0

    def __post_init__(self):
        if self.m < 1 or self.n < 1:
            raise ValueError("m and n must be at least 1")
        if not 1 <= self.k <= min(self.m, self.n):
            raise ValueError(f"k must be in [1, min(m,n)], got {self.k}")
        if not 0.0 <= self.alpha < 0.5:
            raise ValueError(f"alpha must be in [0,0.5), got {self.alpha}")
        if self.delta < 0.0:
            raise ValueError("delta must be nonnegative")
        if self.outlier_scale <= 0.0:
            raise ValueError("outlier_scale must be positive")


@dataclass
class SynthDataset:
    A: np.ndarray
    B: np.ndarray
    outlier_mask: np.ndarray  # bool, length m
    delta_gap: float
    max_clean_norm: float
    params: SynthParams


def _shuffled_indices(m: int, stream: RandomStream) -> np.ndarray:
    """Fisher-Yates shuffle of 0..m-1 driven by stream uniforms."""
    idx = list(range(m))
    if m > 1:
        u = stream.uniforms(m - 1)
        for i in range(m - 1, 0, -1):
            j = int(u[m - 1 - i] * (i + 1))
            idx[i], idx[j] = idx[j], idx[i]
    return np.array(idx, dtype=np.int64)


def _unit_rows(vectors: np.ndarray) -> np.ndarray:
    norms = all_row_norms(vectors)
    return vectors / norms[:, np.newaxis]


def generate(params: SynthParams) -> SynthDataset:
    m, n, k = params.m, params.n, params.k
    U = RandomStream(params.seed, "synth-U").standard_normals(m * k).reshape(m, k)
    V = RandomStream(params.seed, "synth-V").standard_normals(k * n).reshape(k, n)
    B = matmul(U, V)

    n_out = math.floor(params.alpha * m)
    order = _shuffled_indices(m, RandomStream(params.seed, "synth-mask"))
    mask = np.zeros(m, dtype=bool)
    mask[order[:n_out]] = True

    clean_norms = all_row_norms(B)[~mask]
    max_clean = float(clean_norms.max())
    gap = params.outlier_scale * max_clean

    noise_stream = RandomStream(params.seed, "synth-noise")
    directions = _unit_rows(noise_stream.standard_normals(m * n).reshape(m, n))
    magnitudes = noise_stream.uniforms(m, 0.0, params.delta) if params.delta > 0 else np.zeros(m)

    A = B.copy()
    inliers = ~mask
    A[inliers] += directions[inliers] * magnitudes[inliers, np.newaxis]

    if n_out > 0:
        adv = RandomStream(params.seed, "synth-adv").standard_normals(n_out * n).reshape(n_out, n)
        A[mask] = _unit_rows(adv) * (max_clean + gap)

    return SynthDataset(
        A=A,
        B=B,
        outlier_mask=mask,
        delta_gap=gap,
        max_clean_norm=max_clean,
        params=params,
    )


def gamma_of(ds: SynthDataset) -> float:
    """Normalized norm gap: delta_gap / max_clean_norm (the outlier scale,
    by construction)."""
    if ds.max_clean_norm <= 0.0:
        raise ValueError("max clean norm must be positive")
    return ds.delta_gap / ds.max_clean_norm
