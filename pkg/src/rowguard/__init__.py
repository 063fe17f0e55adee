"""rowguard: single-pass robust randomized low-rank approximation.

Rows are sketched with a Johnson-Lindenstrauss projection, screened by a
median/MAD threshold on the sketched norms, and the retained block is
factored with a randomized rank-k scheme.  Everything is deterministic given
a 64-bit seed.
"""

from .detect import AllRowsDiscardedError, DetectionResult, check_separation, detect_outliers
from .matcore import (
    ThinSVD,
    frobenius_norm,
    householder_qr,
    largest_principal_angle,
    matmul,
    row_norm,
    thin_svd,
)
from .metrics import EvalRecord, inlier_relative_error, precision_recall, subspace_error
from .pipeline import (
    PipelineConfig,
    PipelineResult,
    TheoryBoundInputs,
    TheoryBoundResult,
    eta_bound,
    false_positive_bound,
    kappa_condition,
    run_pipeline,
)
from .rng import RandomStream
from .robstats import (
    RobustEstimates,
    ScaleEstimator,
    Threshold,
    compute_threshold,
    mad_scaled,
    median,
    robust_estimates,
    trimmed_iqr_scale,
)
from .rsvd import RankKApprox, RsvdConfig, best_rank_k_oracle, randomized_rank_k, reconstruct
from .sketch import Distribution, SketchMatrix, SketchSpec, apply_sketch, generate_sketch, sketch_dimension
from .synth import SynthDataset, SynthParams, gamma_of, generate

__version__ = "0.1.0"

__all__ = [
    "AllRowsDiscardedError",
    "DetectionResult",
    "Distribution",
    "EvalRecord",
    "PipelineConfig",
    "PipelineResult",
    "RandomStream",
    "RankKApprox",
    "RobustEstimates",
    "RsvdConfig",
    "ScaleEstimator",
    "SketchMatrix",
    "SketchSpec",
    "SynthDataset",
    "SynthParams",
    "TheoryBoundInputs",
    "TheoryBoundResult",
    "ThinSVD",
    "Threshold",
    "apply_sketch",
    "best_rank_k_oracle",
    "check_separation",
    "compute_threshold",
    "detect_outliers",
    "eta_bound",
    "false_positive_bound",
    "frobenius_norm",
    "gamma_of",
    "generate",
    "generate_sketch",
    "householder_qr",
    "inlier_relative_error",
    "kappa_condition",
    "largest_principal_angle",
    "mad_scaled",
    "matmul",
    "median",
    "precision_recall",
    "randomized_rank_k",
    "reconstruct",
    "robust_estimates",
    "row_norm",
    "run_pipeline",
    "sketch_dimension",
    "subspace_error",
    "thin_svd",
    "trimmed_iqr_scale",
]
