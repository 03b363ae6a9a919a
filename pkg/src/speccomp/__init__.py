"""Spectral projectors and component matrices of dense complex matrices.

The package computes, for an arbitrary square complex matrix, the
eigenprojection at 0 and the full family of component matrices Z_kj (one
projector plus nilpotent ladder per distinct eigenvalue) through products
of polynomial factors in the matrix itself — no eigenvector bases needed
once the eigenvalues, multiplicities and indices are known. On top of the
components sit matrix functions, the Drazin inverse, and limiting matrices
of row-stochastic chains. An independent oracle module provides ground
truth for testing, and a CLI exposes everything for batch use.
"""

from .applications import (
    ScalarFunctionJet,
    cesaro_limit,
    cesaro_residuals,
    drazin_inverse,
    drazin_residuals,
    matrix_function,
)
from .components import (
    ComponentSet,
    all_components,
    component,
    eigenprojection_residuals,
    eigenprojection_zero,
    lagrange_projector,
)
from .exceptions import (
    ClusteringError,
    ConditioningError,
    ConvergenceError,
    InputFormatError,
    PreconditionError,
    SingularMatrixError,
    SpectralError,
)
from .linalg import (
    DEFAULT_TOLERANCES,
    ToleranceConfig,
    as_matrix,
    frob,
    identity,
    mat_mul,
    mat_pow,
    rank_numeric,
    solve,
)
from .oracle import (
    JordanSpec,
    build_case,
    case_document,
    components_by_nullspace,
    integer_similarity,
)
from .spectrum import (
    Spectrum,
    analyze,
    cluster_spectrum,
    effective_cluster_radius,
    eigen_index,
    eigenvalues_raw,
    replace_eigenvalue,
    spectrum_from_data,
)

__version__ = "0.1.0"

__all__ = [
    "ScalarFunctionJet",
    "cesaro_limit",
    "cesaro_residuals",
    "drazin_inverse",
    "drazin_residuals",
    "matrix_function",
    "ComponentSet",
    "all_components",
    "component",
    "eigenprojection_residuals",
    "eigenprojection_zero",
    "lagrange_projector",
    "ClusteringError",
    "ConditioningError",
    "ConvergenceError",
    "InputFormatError",
    "PreconditionError",
    "SingularMatrixError",
    "SpectralError",
    "DEFAULT_TOLERANCES",
    "ToleranceConfig",
    "as_matrix",
    "frob",
    "identity",
    "mat_mul",
    "mat_pow",
    "rank_numeric",
    "solve",
    "JordanSpec",
    "build_case",
    "case_document",
    "components_by_nullspace",
    "integer_similarity",
    "Spectrum",
    "analyze",
    "cluster_spectrum",
    "effective_cluster_radius",
    "eigen_index",
    "eigenvalues_raw",
    "replace_eigenvalue",
    "spectrum_from_data",
    "__version__",
]
