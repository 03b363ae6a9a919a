"""Dense complex matrix primitives shared by the whole package.

Higher-level code works on plain ``numpy.ndarray`` values of dtype
``complex128``. This module centralizes input validation (squareness,
finiteness), the tolerance policy, and the factorization-backed primitives
(numerical rank, linear solve) everything else consumes.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .exceptions import ConditioningError, PreconditionError, SingularMatrixError

__all__ = [
    "ToleranceConfig",
    "DEFAULT_TOLERANCES",
    "as_matrix",
    "identity",
    "frob",
    "mat_mul",
    "mat_pow",
    "rank_numeric",
    "solve",
]


@dataclass(frozen=True)
class ToleranceConfig:
    """Numerical thresholds used throughout the package.

    ``eig_cluster_radius`` is relative: clustering scales it by
    ``max(1, largest |eigenvalue|)`` before use, so the default behaves the
    same for small and large matrices. ``rank_rel_threshold`` is relative to
    the largest singular value (or pivot). ``verify_tol`` bounds the
    residuals accepted by self-checks and by the CLI's verification step.
    """

    eig_cluster_radius: float = 1e-8
    rank_rel_threshold: float = 1e-10
    verify_tol: float = 1e-8

    def __post_init__(self):
        for name in ("eig_cluster_radius", "rank_rel_threshold", "verify_tol"):
            value = float(getattr(self, name))
            if not np.isfinite(value) or value <= 0.0:
                raise PreconditionError(
                    f"{name} must be a strictly positive finite number, got {value!r}"
                )
            object.__setattr__(self, name, value)


DEFAULT_TOLERANCES = ToleranceConfig()


def as_matrix(a) -> np.ndarray:
    """Validate ``a`` as a nonempty square matrix and return it as complex128.

    Raises :class:`PreconditionError` for non-square input or non-finite
    entries. Always returns a fresh array, so callers may treat results as
    immutable values.
    """
    m = np.array(a, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] == 0:
        raise PreconditionError(f"expected a nonempty square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise PreconditionError("matrix entries must all be finite")
    return m


def identity(n: int) -> np.ndarray:
    """The n-by-n complex identity."""
    return np.eye(n, dtype=complex)


def frob(a) -> float:
    """Frobenius norm."""
    return float(np.linalg.norm(a, "fro"))


def _finite(m: np.ndarray, what: str) -> np.ndarray:
    if not np.all(np.isfinite(m)):
        raise ConditioningError(f"{what} overflowed to non-finite entries")
    return m


def mat_mul(a, b) -> np.ndarray:
    """Matrix product with dimension checking."""
    a = as_matrix(a)
    b = as_matrix(b)
    if a.shape[0] != b.shape[0]:
        raise PreconditionError(
            f"dimension mismatch: {a.shape[0]}x{a.shape[0]} times {b.shape[0]}x{b.shape[0]}"
        )
    return _finite(a @ b, "matrix product")


def mat_pow(a, e) -> np.ndarray:
    """``a`` raised to a nonnegative integer power, by repeated squaring."""
    a = as_matrix(a)
    if int(e) != e or e < 0:
        raise PreconditionError(f"exponent must be a nonnegative integer, got {e!r}")
    e = int(e)
    result = identity(a.shape[0])
    base = a
    while e:
        if e & 1:
            result = result @ base
        e >>= 1
        if e:
            base = base @ base
    return _finite(result, "matrix power")


def rank_numeric(a, cfg: ToleranceConfig | None = None) -> int:
    """Numerical rank: singular values above ``rank_rel_threshold`` times the largest.

    The threshold is relative, so the rank is scale-free; an exactly zero
    matrix has rank 0, but a matrix of tiny nonzero noise does not.
    """
    a = as_matrix(a)
    cfg = cfg or DEFAULT_TOLERANCES
    sv = np.linalg.svd(a, compute_uv=False)
    if sv[0] == 0.0:
        return 0
    return int(np.count_nonzero(sv > cfg.rank_rel_threshold * sv[0]))


def solve(a, b, cfg: ToleranceConfig | None = None) -> np.ndarray:
    """Solve ``a @ x = b`` by LU with partial pivoting plus one refinement step.

    Raises :class:`SingularMatrixError`, carrying the offending pivot
    magnitude, when the smallest pivot falls below ``rank_rel_threshold``
    relative to the largest.
    """
    a = as_matrix(a)
    b = as_matrix(b)
    cfg = cfg or DEFAULT_TOLERANCES
    if a.shape[0] != b.shape[0]:
        raise PreconditionError(
            f"dimension mismatch: {a.shape[0]}x{a.shape[0]} system, {b.shape[0]}x{b.shape[0]} right-hand side"
        )
    with warnings.catch_warnings():
        # the pivot check below re-reports singularity as a typed error
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(a, check_finite=False)
    pivots = np.abs(np.diag(lu))
    largest = float(pivots.max())
    smallest = float(pivots.min())
    if largest == 0.0 or smallest <= cfg.rank_rel_threshold * largest:
        raise SingularMatrixError(
            f"matrix is numerically singular: pivot magnitude {smallest:.3e} "
            f"(largest pivot {largest:.3e})",
            pivot=smallest,
        )
    x = scipy.linalg.lu_solve((lu, piv), b, check_finite=False)
    x = x + scipy.linalg.lu_solve((lu, piv), b - a @ x, check_finite=False)
    return _finite(x, "linear solve")
