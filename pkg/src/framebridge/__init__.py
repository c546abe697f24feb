"""Erasure recovery for finite frames and sampling schemes.

Two exact recovery routes are provided.  Coefficient bridging replaces
erased analysis coefficients with fixed linear combinations of surviving
ones chosen so the reduced error operator is nilpotent of index 2, after
which one matrix application finishes the reconstruction.  Alternatively,
when the partial reconstruction operator is invertible, a factored
closed-form inverse recovers the vector at the cost of a small linear
solve on the erased set.  Sampling schemes, designer duals, and
spark/skew-spark audits round out the toolkit.
"""

from .bridging import (
    BridgePlan,
    ReconstructionReport,
    bridge_matrix,
    error_operator,
    find_bridge_set,
    is_robust_by_rank,
    nonzero_eigenvalue_count,
    partial_reconstruction_operator,
    plan_from_coefficients,
    reconstruct_vector,
    recover_coefficients,
    reduced_error_operator,
    single_erasure_bridge,
    solve_bridge,
)
from .errors import (
    NoRobustBridgeError,
    NotAFrameError,
    NotInvertibleError,
    SingularMatrixError,
    UnderdeterminedSchemeError,
    UnsupportedSizeError,
)
from .frames import (
    DualFramePair,
    Frame,
    IndexSet,
    analysis,
    canonical_dual,
    cross_gram,
    frame_bounds,
    frame_operator,
    inner,
    minimal_redundancy,
    spark,
    synthesis,
    verify_dual_pair,
)
from .inversion import (
    InverseForm,
    invert_partial_reconstruction,
    precondition_terms,
    reconstruct_via_inverse,
)
from .numerics import DEFAULT_TOL, Tolerance
from .sampling import (
    SampleRecovery,
    SamplingScheme,
    build_trig_scheme,
    build_truncated_shannon,
    recover_samples,
    sampling_bridge_matrix,
)
from .spark_lab import (
    GenericityStats,
    SkewSparkReport,
    designer_dual,
    erasure_size_bound,
    extend_to_dual,
    genericity_trial,
    random_dual,
    skew_spark_audit,
)

__version__ = "0.1.0"

__all__ = [
    "BridgePlan",
    "DEFAULT_TOL",
    "DualFramePair",
    "Frame",
    "GenericityStats",
    "IndexSet",
    "InverseForm",
    "NoRobustBridgeError",
    "NotAFrameError",
    "NotInvertibleError",
    "ReconstructionReport",
    "SampleRecovery",
    "SamplingScheme",
    "SingularMatrixError",
    "SkewSparkReport",
    "Tolerance",
    "UnderdeterminedSchemeError",
    "UnsupportedSizeError",
    "analysis",
    "bridge_matrix",
    "build_trig_scheme",
    "build_truncated_shannon",
    "canonical_dual",
    "cross_gram",
    "designer_dual",
    "erasure_size_bound",
    "error_operator",
    "extend_to_dual",
    "find_bridge_set",
    "frame_bounds",
    "frame_operator",
    "genericity_trial",
    "inner",
    "invert_partial_reconstruction",
    "is_robust_by_rank",
    "minimal_redundancy",
    "nonzero_eigenvalue_count",
    "partial_reconstruction_operator",
    "plan_from_coefficients",
    "precondition_terms",
    "reconstruct_via_inverse",
    "reconstruct_vector",
    "recover_coefficients",
    "recover_samples",
    "reduced_error_operator",
    "random_dual",
    "sampling_bridge_matrix",
    "single_erasure_bridge",
    "skew_spark_audit",
    "solve_bridge",
    "spark",
    "synthesis",
    "verify_dual_pair",
]
