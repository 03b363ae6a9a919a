"""Consumers of the component calculus: matrix functions, the Drazin
inverse, and limiting matrices of row-stochastic chains."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .components import ComponentSet, component, eigenprojection_zero
from .exceptions import PreconditionError
from .linalg import DEFAULT_TOLERANCES, ToleranceConfig, as_matrix, frob, identity, mat_pow, solve
from .spectrum import Spectrum, analyze, effective_cluster_radius, replace_eigenvalue

__all__ = [
    "ScalarFunctionJet",
    "matrix_function",
    "drazin_inverse",
    "cesaro_limit",
    "drazin_residuals",
    "cesaro_residuals",
]


@dataclass(frozen=True)
class ScalarFunctionJet:
    """A scalar function bundled with its derivatives.

    ``evaluator(lam, j)`` returns the j-th derivative at ``lam``;
    ``max_order`` is the highest order the evaluator supports.
    """

    evaluator: Callable
    max_order: int

    def __call__(self, lam: complex, j: int) -> complex:
        if j > self.max_order:
            raise PreconditionError(
                f"derivative order {j} requested, evaluator supports up to {self.max_order}"
            )
        return complex(self.evaluator(lam, j))


def matrix_function(cs: ComponentSet, f: ScalarFunctionJet) -> np.ndarray:
    """Evaluate f on a matrix through its components.

    The defining property of the component family: f(A) is the finite
    double sum of ``f^(j)(lam_k) * Z_kj`` over all positions and orders.
    """
    needed = max(cs.spectrum.indices) - 1
    if f.max_order < needed:
        raise PreconditionError(
            f"spectrum needs derivatives up to order {needed}, evaluator stops at {f.max_order}"
        )
    n = cs.spectrum.source_dim
    out = np.zeros((n, n), dtype=complex)
    for (k, j) in cs.keys():
        out += f(cs.spectrum.eigenvalues[k - 1], j) * cs.parts[(k, j)]
    return out


def drazin_inverse(a, sp: Spectrum, cfg: ToleranceConfig | None = None) -> np.ndarray:
    """Drazin inverse via the eigenprojection at zero.

    With Z that projection, ``A + Z`` is always nonsingular (A is invertible
    off the generalized nullspace and acts as identity-plus-nilpotent on
    it), and ``(A + Z)^-1 (I - Z)`` satisfies the Drazin axioms. A singular
    solve here means Z was wrong for this matrix.
    """
    a = as_matrix(a)
    cfg = cfg or DEFAULT_TOLERANCES
    z = eigenprojection_zero(a, sp, cfg)
    return solve(a + z, identity(a.shape[0]) - z, cfg)


def cesaro_limit(p, cfg: ToleranceConfig | None = None) -> np.ndarray:
    """Limiting matrix of a row-stochastic chain.

    Returns the order-0 component of P at eigenvalue 1 — the long-run
    average of the powers of P, which exists even for periodic chains. The
    eigenvalue cluster nearest 1 (within 10x the effective clustering
    radius) is snapped to exactly 1 before the component engine runs,
    mirroring the zero-snap rule.
    """
    p = as_matrix(p)
    cfg = cfg or DEFAULT_TOLERANCES
    tol = cfg.verify_tol
    row_sums = p.sum(axis=1)
    if np.max(np.abs(row_sums - 1.0)) > tol:
        raise PreconditionError(
            "matrix is not row-stochastic: row sums deviate from 1 by "
            f"{np.max(np.abs(row_sums - 1.0)):.3e}"
        )
    if np.max(np.abs(p.imag)) > tol or np.min(p.real) < -tol:
        raise PreconditionError("matrix is not row-stochastic: entries must be (near-)real and nonnegative")

    sp = analyze(p, cfg, exponents="minimal")
    values = np.asarray(sp.eigenvalues, dtype=complex)
    k = int(np.abs(values - 1.0).argmin()) + 1
    distance = abs(values[k - 1] - 1.0)
    if distance > 10.0 * effective_cluster_radius(values, cfg):
        raise PreconditionError(
            f"eigenvalue 1 not found in the spectrum (nearest is {values[k - 1]}); "
            "the matrix is not stochastic to working accuracy"
        )
    if values[k - 1] != 1.0:
        sp = replace_eigenvalue(sp, k, 1.0)
        k = sp.position_of(1.0)
    return component(p, sp, k, 0, cfg)


def drazin_residuals(a, a_d, ind_a: int) -> dict:
    """Residuals of the three Drazin axioms, scaled like the component checks.

    The axioms: ``A^D A A^D = A^D``, ``A A^D = A^D A``, and
    ``A^(k+1) A^D = A^k`` with k the index of eigenvalue 0.
    """
    a = as_matrix(a)
    a_d = as_matrix(a_d)
    a_k = mat_pow(a, ind_a)
    a_k1 = a_k @ a
    return {
        "inner_inverse": frob(a_d @ a @ a_d - a_d) / max(1.0, frob(a_d) ** 2 * frob(a)),
        "commutation": frob(a @ a_d - a_d @ a) / max(1.0, frob(a) * frob(a_d)),
        "power_identity": frob(a_k1 @ a_d - a_k) / max(1.0, frob(a_k1) * frob(a_d)),
    }


def cesaro_residuals(p, limit) -> dict:
    """Residuals of the identities a limiting matrix must satisfy.

    Idempotency, two-sided commutation/absorption against P, row sums of 1,
    and entry nonnegativity (reported as the worst negative excursion).
    """
    p = as_matrix(p)
    limit = as_matrix(limit)
    scale = max(1.0, frob(p) * frob(limit))
    return {
        "idempotency": frob(limit @ limit - limit) / max(1.0, frob(limit) ** 2),
        "commutation": frob(p @ limit - limit @ p) / scale,
        "absorption": frob(p @ limit - limit) / scale,
        "row_sums": float(np.max(np.abs(limit.sum(axis=1) - 1.0))),
        "negativity": float(max(0.0, -np.min(limit.real))),
    }
