"""Weighted polygamy inequalities for multipartite entanglement.

Numerical toolkit for assisted entanglement (concave-roof optimization over
pure-state decompositions), Hamming-weight weighted upper bounds with a
sharpened coefficient, and reproducible randomized audits of the resulting
inequality chains on small multipartite states.
"""

from ._accel import BACKEND, NUMBA_ENABLED
from .audit import (
    AuditConfig,
    AuditRecord,
    AuditSummary,
    SweepRow,
    TangleRecord,
    WSTATE_LHS,
    WSTATE_PAIR,
    WSTATE_PROFILE,
    audit_mixed_state,
    audit_pure_state,
    beta_sweep,
    lemma_grid_audit,
    random_audit,
    tangle_audit,
    tangle_check,
    wstate_case,
)
from .bounds import (
    BoundParams,
    BoundReport,
    EntanglementProfile,
    INCONCLUSIVE,
    NOT_APPLICABLE,
    VERIFIED,
    as_profile,
    binary_vector,
    check_condition_thm1,
    check_condition_thm2,
    evaluate_bounds,
    hamming_weight,
    kim_bound,
    lemma1_residual,
    optimal_k_thm1,
    optimal_k_thm2,
    powb,
    thm1_bound,
    thm2_bound,
    weight_factor,
)
from .errors import (
    ConvergenceError,
    DomainError,
    LayoutError,
    PolygamyLabError,
    PositivityError,
    RangeError,
    ShapeError,
    SizeError,
    StateFileError,
)
from .linalg import (
    MAX_TOTAL_DIM,
    HermitianEigen,
    hermitian_eig,
    partial_trace_matrix,
    tensor_product,
)
from .measures import (
    Decomposition,
    EoaEstimate,
    OptimizerDiagnostics,
    OptimizerOptions,
    assisted_measure,
    entropy_of_eigenvalues,
    pure_entanglement,
    random_decomposition,
    tangle_pure,
    von_neumann_entropy,
)
from .states import (
    DensityMatrix,
    PureState,
    SystemLayout,
    bell_state,
    haar_random_pure,
    qubits,
    random_mixed,
    regroup_bipartite,
    w_state,
)

__version__ = "0.1.0"

__all__ = [
    "AuditConfig",
    "AuditRecord",
    "AuditSummary",
    "BACKEND",
    "BoundParams",
    "BoundReport",
    "ConvergenceError",
    "Decomposition",
    "DensityMatrix",
    "DomainError",
    "EntanglementProfile",
    "EoaEstimate",
    "HermitianEigen",
    "INCONCLUSIVE",
    "LayoutError",
    "MAX_TOTAL_DIM",
    "NOT_APPLICABLE",
    "NUMBA_ENABLED",
    "OptimizerDiagnostics",
    "OptimizerOptions",
    "PolygamyLabError",
    "PositivityError",
    "PureState",
    "RangeError",
    "ShapeError",
    "SizeError",
    "StateFileError",
    "SweepRow",
    "SystemLayout",
    "TangleRecord",
    "VERIFIED",
    "WSTATE_LHS",
    "WSTATE_PAIR",
    "WSTATE_PROFILE",
    "as_profile",
    "assisted_measure",
    "audit_mixed_state",
    "audit_pure_state",
    "bell_state",
    "beta_sweep",
    "binary_vector",
    "check_condition_thm1",
    "check_condition_thm2",
    "entropy_of_eigenvalues",
    "evaluate_bounds",
    "haar_random_pure",
    "hamming_weight",
    "hermitian_eig",
    "kim_bound",
    "lemma1_residual",
    "lemma_grid_audit",
    "optimal_k_thm1",
    "optimal_k_thm2",
    "partial_trace_matrix",
    "powb",
    "pure_entanglement",
    "qubits",
    "random_audit",
    "random_decomposition",
    "random_mixed",
    "regroup_bipartite",
    "tangle_audit",
    "tangle_check",
    "tangle_pure",
    "tensor_product",
    "thm1_bound",
    "thm2_bound",
    "von_neumann_entropy",
    "w_state",
    "weight_factor",
    "wstate_case",
]
