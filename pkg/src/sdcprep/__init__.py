"""Workbench for exact state preparation over ground-pair entanglement.

Given the coefficient matrix of a bipartite pure state, this package
decides whether the state can be prepared exactly with certainty by
operating on half of an entangled resource superposed over ground-state
pairs, constructs the optimal resource and sender operation with its
two-outcome measurement, computes analytic success probabilities and
pairwise lower bounds, simulates the protocol, and numerically
optimizes the resource weights.
"""

__version__ = "0.1.0"

from .coding import (
    KrausPair,
    PreparationPlan,
    ViolationBoundReport,
    canonical_shared,
    construct_plan,
    decide_perfect,
    kraus_from_operation,
    maximal_baseline,
    plan_for_shared,
    single_violation_bound,
    success_probability,
)
from .errors import (
    BadLength,
    ConvergenceFailure,
    DimensionMismatch,
    DimensionTooLarge,
    InfeasibleShared,
    NegativeEigenvalue,
    NotHermitian,
    NotNormalized,
    NotSingleViolation,
    NotSquare,
    ParseError,
    SdcError,
    ZeroColumn,
    ZeroOperator,
    ZeroProbabilityBranch,
)
from .linalg import (
    DEFAULT_TOL,
    HermitianEigenResult,
    adjoint,
    gram,
    hermitian_eig,
    is_unitary,
    matmul,
    spectral_norm,
    svd,
    trace,
)
from .optimize import OptimizationResult, SeedPoint, objective, optimize_shared
from .simulate import (
    SimulationConfig,
    SimulationResult,
    conditional_output,
    outcome_probability,
    run_protocol,
)
from .states import (
    GramReport,
    SchmidtForm,
    SharedState,
    TargetState,
    Violation,
    apply_permutations,
    column_gram_report,
    entanglement_entropy,
    schmidt_decompose,
    target_from_amplitudes,
)

__all__ = [
    "__version__",
    "DEFAULT_TOL",
    # linalg
    "HermitianEigenResult", "adjoint", "matmul", "trace", "gram",
    "hermitian_eig", "spectral_norm", "svd", "is_unitary",
    # states
    "TargetState", "SharedState", "SchmidtForm", "GramReport", "Violation",
    "target_from_amplitudes", "schmidt_decompose", "entanglement_entropy",
    "column_gram_report", "apply_permutations",
    # coding
    "KrausPair", "PreparationPlan", "ViolationBoundReport",
    "decide_perfect", "canonical_shared", "construct_plan", "plan_for_shared",
    "success_probability", "maximal_baseline", "single_violation_bound",
    "kraus_from_operation",
    # simulate
    "SimulationConfig", "SimulationResult", "outcome_probability",
    "conditional_output", "run_protocol",
    # optimize
    "OptimizationResult", "SeedPoint", "objective", "optimize_shared",
    # errors
    "SdcError", "DimensionMismatch", "NotSquare", "NotHermitian",
    "ConvergenceFailure", "BadLength", "NotNormalized", "ParseError",
    "InfeasibleShared", "NotSingleViolation", "ZeroColumn", "ZeroOperator",
    "NegativeEigenvalue", "ZeroProbabilityBranch", "DimensionTooLarge",
]
