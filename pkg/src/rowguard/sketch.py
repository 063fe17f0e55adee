"""Johnson-Lindenstrauss projection of rows.

Builds the n x s projection matrix (Gaussian or sparse Rademacher), sizes s
from the distortion/failure-rate parameters, and applies it to form the row
sketch.  Both entry distributions are normalized so the squared norm of a
projected vector is unbiased: Gaussian entries have variance 1/s, sparse
entries are +-1/sqrt(q*s) with probability q/2 each and zero otherwise.

When the computed dimension is at least the ambient width n, projecting is
pointless; the projection collapses to the identity and the sketch is flagged
as bypassed.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .matcore import as_matrix, matmul
from .rng import RandomStream


class Distribution(enum.Enum):
    GAUSSIAN = "gaussian"
    SPARSE_RADEMACHER = "sparse"


@dataclass
class SketchSpec:
    """Projection parameters.

    epsilon: norm distortion bound in (0, 1)
    delta_prime: failure probability in (0, 1)
    alpha: adversarial row fraction bound in [0, 0.5)
    distribution: entry distribution of the projection
    dim_constant: leading constant of the dimension formula (default 8)
    sparse_density: nonzero probability q of the sparse variant (default 1/3)
    seed: 64-bit stream seed
    """

    epsilon: float
    delta_prime: float
    alpha: float = 0.1
    distribution: Distribution = Distribution.GAUSSIAN
    dim_constant: float = 8.0
    sparse_density: float = 1.0 / 3.0
    seed: int = 0

    def __post_init__(self):
        if not 0.0 < self.epsilon < 1.0:
            raise ValueError(f"epsilon must be in (0,1), got {self.epsilon}")
        if not 0.0 < self.delta_prime < 1.0:
            raise ValueError(f"delta_prime must be in (0,1), got {self.delta_prime}")
        if not 0.0 <= self.alpha < 0.5:
            raise ValueError(f"alpha must be in [0,0.5), got {self.alpha}")
        if self.dim_constant <= 0:
            raise ValueError("dim_constant must be positive")
        if not 0.0 < self.sparse_density <= 1.0:
            raise ValueError(f"sparse_density must be in (0,1], got {self.sparse_density}")


@dataclass
class SketchMatrix:
    psi: np.ndarray  # n x s
    spec: SketchSpec
    s: int
    bypassed: bool = field(default=False)


def sketch_dimension(spec: SketchSpec, m: int) -> int:
    """ceil(dim_constant * eps^-2 * ln((1 - alpha) * m / delta_prime))."""
    if m < 1:
        raise ValueError("m must be at least 1")
    arg = (1.0 - spec.alpha) * m / spec.delta_prime
    if arg <= 1.0:
        raise ValueError(f"log argument must exceed 1, got {arg}")
    return math.ceil(spec.dim_constant * spec.epsilon ** -2 * math.log(arg))


def gaussian_entries(stream: RandomStream, n: int, s: int) -> np.ndarray:
    """n x s matrix of N(0, 1/s) entries in row-major order."""
    return stream.standard_normals(n * s).reshape(n, s) / np.sqrt(float(s))


def sparse_rademacher_entries(stream: RandomStream, n: int, s: int, q: float) -> np.ndarray:
    """n x s matrix with entries +-1/sqrt(q*s) w.p. q/2 each, else zero."""
    u = stream.uniforms(n * s).reshape(n, s)
    value = 1.0 / np.sqrt(q * s)
    return np.where(u < q / 2.0, value, np.where(u < q, -value, 0.0))


def generate_sketch(spec: SketchSpec, n: int, m: int) -> SketchMatrix:
    """Realize the projection matrix for data with n columns and m rows.

    Entries are generated in row-major order from the stream (seed, "psi").
    If the formula dimension reaches n the identity is returned instead and
    the bypass flag is set.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    dim = sketch_dimension(spec, m)
    if dim >= n:
        return SketchMatrix(psi=np.eye(n), spec=spec, s=n, bypassed=True)

    stream = RandomStream(spec.seed, "psi")
    if spec.distribution is Distribution.GAUSSIAN:
        psi = gaussian_entries(stream, n, dim)
    else:
        psi = sparse_rademacher_entries(stream, n, dim, spec.sparse_density)
    return SketchMatrix(psi=psi, spec=spec, s=dim, bypassed=False)


def apply_sketch(A, psi: SketchMatrix) -> np.ndarray:
    """S = A @ psi (m x s).  The identity bypass returns a copy of A."""
    A = as_matrix(A)
    if A.shape[1] != psi.psi.shape[0]:
        raise ValueError(
            f"column count {A.shape[1]} does not match projection rows {psi.psi.shape[0]}"
        )
    if psi.bypassed:
        return A.copy()
    return matmul(A, psi.psi)
