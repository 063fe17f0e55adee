"""End-to-end run: sketch rows, screen outliers, factor the retained block,
re-embed with zero rows.  Also the closed-form error-budget arithmetic that
accompanies the guarantees (false-positive bound, additive error eta, and
the minimal signal ratio kappa for a given distortion epsilon)."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .detect import DetectionResult, detect_outliers
from .matcore import as_matrix
from .rsvd import RankKApprox, RsvdConfig, randomized_rank_k, reconstruct
from .sketch import SketchSpec, apply_sketch, generate_sketch


@dataclass
class PipelineConfig:
    sketch: SketchSpec
    rsvd: RsvdConfig
    threshold_c: float = 3.0

    def __post_init__(self):
        if self.threshold_c <= 0:
            raise ValueError("threshold_c must be positive")


@dataclass
class PipelineResult:
    B_tilde: np.ndarray  # m x n, zero rows at discarded indices
    detection: DetectionResult
    factors: RankKApprox
    projection_bypassed: bool
    sketch_width: int
    wall_time_ms: float


def run_pipeline(A, cfg: PipelineConfig) -> PipelineResult:
    """Sketch -> screen -> randomized rank-k on the retained rows."""
    A = as_matrix(A, "input")
    if A.shape[0] < 2:
        raise ValueError("pipeline needs at least 2 rows")
    start = time.perf_counter()

    sk = generate_sketch(cfg.sketch, n=A.shape[1], m=A.shape[0])
    S = apply_sketch(A, sk)
    detection = detect_outliers(S, cfg.threshold_c)

    retained_block = A[detection.retained]
    factors = randomized_rank_k(retained_block, cfg.rsvd)

    B_tilde = np.zeros_like(A)
    B_tilde[detection.retained] = reconstruct(factors)

    wall_ms = (time.perf_counter() - start) * 1000.0
    return PipelineResult(
        B_tilde=B_tilde,
        detection=detection,
        factors=factors,
        projection_bypassed=sk.bypassed,
        sketch_width=sk.s,
        wall_time_ms=wall_ms,
    )


def false_positive_bound(c: float) -> float:
    """Fraction of clean rows lost to the threshold: min(1, 2 exp(-c^2/2))."""
    if c <= 0:
        raise ValueError("threshold constant c must be positive")
    return min(1.0, 2.0 * math.exp(-c * c / 2.0))


@dataclass
class TheoryBoundInputs:
    """Quantities entering the additive error budget.

    gamma is the normalized norm gap, kappa the signal-to-noise floor, c the
    threshold constant.  beta_override substitutes an externally measured or
    assumed false-positive rate for the closed-form bound.
    """

    epsilon: float
    alpha: float
    gamma: float
    delta: float
    kappa: float
    c: float
    max_clean_norm: float
    min_clean_norm: float
    beta_override: Optional[float] = field(default=None)

    def __post_init__(self):
        if not 0.0 < self.epsilon < 1.0:
            raise ValueError(f"epsilon must be in (0,1), got {self.epsilon}")
        if not 0.0 <= self.alpha < 0.5:
            raise ValueError(f"alpha must be in [0,0.5), got {self.alpha}")
        if self.gamma <= 0.0:
            raise ValueError("gamma must be positive")
        if self.kappa <= 1.0:
            raise ValueError("kappa must exceed 1")
        if self.delta < 0.0:
            raise ValueError("delta must be nonnegative")
        if self.c <= 0.0:
            raise ValueError("c must be positive")
        if self.min_clean_norm <= 0.0 or self.max_clean_norm < self.min_clean_norm:
            raise ValueError("need 0 < min_clean_norm <= max_clean_norm")
        if self.beta_override is not None and not 0.0 <= self.beta_override <= 1.0:
            raise ValueError("beta_override must be in [0,1]")


@dataclass
class TheoryBoundResult:
    beta: float
    C: float
    C1: float
    C2: float
    psi: float
    eta: float


def eta_bound(inputs: TheoryBoundInputs, conservative_cross_term: bool = False) -> TheoryBoundResult:
    """Additive error budget eta = C1 * delta^2 / min_clean_norm + C2 * psi.

    C1 = (1 + C) sqrt(1 - alpha - beta), C2 = (1 + C) sqrt(beta) and
    psi = (alpha / gamma) * max_clean_norm^2.  The cross-term constant C is
    1 + epsilon, or its worst-case cap 2 when conservative_cross_term is set.
    """
    beta = inputs.beta_override if inputs.beta_override is not None else false_positive_bound(inputs.c)
    if inputs.alpha + beta >= 1.0:
        raise ValueError(f"alpha + beta must stay below 1, got {inputs.alpha + beta}")
    C = 2.0 if conservative_cross_term else 1.0 + inputs.epsilon
    C1 = (1.0 + C) * math.sqrt(1.0 - inputs.alpha - beta)
    C2 = (1.0 + C) * math.sqrt(beta)
    psi = inputs.alpha / inputs.gamma * inputs.max_clean_norm ** 2
    eta = C1 * inputs.delta ** 2 / inputs.min_clean_norm + C2 * psi
    return TheoryBoundResult(beta=beta, C=C, C1=C1, C2=C2, psi=psi, eta=eta)


def kappa_condition(epsilon: float) -> float:
    """Minimal signal ratio kappa = 4 (1 + epsilon) / epsilon that keeps the
    noise cross-term within the distortion budget."""
    if not 0.0 < epsilon < 1.0:
        raise ValueError(f"epsilon must be in (0,1), got {epsilon}")
    return 4.0 * (1.0 + epsilon) / epsilon
