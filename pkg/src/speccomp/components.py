"""Eigenprojections and spectral components via polynomial products.

The eigenprojection at 0 is the product over the nonzero eigenvalues of
``(I - (A/lam_i)^u)^(u_i)``. The order-j component at ``lam_k`` comes from
the same product built for the shifted matrix ``A - lam_k I`` — with inner
power ``u_k`` and the remaining eigenvalues shifted — times the trailing
``(1/j!) (A - lam_k I)^j`` factor. Factors commute exactly (they are
polynomials in A) but floating point does not, so they are always
multiplied in ascending position order; outputs are reproducible
bit-for-bit per build.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .exceptions import ConditioningError, PreconditionError
from .linalg import DEFAULT_TOLERANCES, ToleranceConfig, as_matrix, frob, identity, mat_pow
from .spectrum import Spectrum

__all__ = [
    "ComponentSet",
    "eigenprojection_zero",
    "component",
    "all_components",
    "lagrange_projector",
    "eigenprojection_residuals",
]

# j! is evaluated in floating point; orders past this are rejected up front
# rather than allowed to degrade accuracy.
MAX_COMPONENT_ORDER = 20


@dataclass(frozen=True)
class ComponentSet:
    """The family of component matrices of one source matrix.

    ``parts`` maps ``(k, j)`` to the order-j component at the k-th
    eigenvalue, with k 1-based in spectrum order and 0 <= j < index_k.
    The j = 0 entries are the eigenprojections.
    """

    source: np.ndarray
    spectrum: Spectrum
    parts: dict = field(repr=False)

    def part(self, k: int, j: int) -> np.ndarray:
        if (k, j) not in self.parts:
            raise PreconditionError(f"no component at position k={k}, order j={j}")
        return self.parts[(k, j)]

    def projector(self, k: int) -> np.ndarray:
        """The eigenprojection at the k-th eigenvalue (the order-0 component)."""
        return self.part(k, 0)

    def keys(self):
        return sorted(self.parts)

    def residuals(self) -> dict:
        """Worst-case residuals of the defining algebraic identities.

        Each residual is a Frobenius norm scaled by max(1, the norms of the
        matrices entering the identity), so a value near machine precision
        means the identity holds to working accuracy regardless of scale:

        - ``idempotency``:            Z_k0 @ Z_k0 = Z_k0
        - ``commutation``:            A @ Z_kj = Z_kj @ A
        - ``resolution_of_identity``: sum_k Z_k0 = I
        - ``orthogonality``:          Z_k0 @ Z_l0 = 0 for k != l
        - ``annihilation``:           (A - lam_k I)^index_k @ Z_k0 = 0
        - ``ladder``:                 (A - lam_k I) @ Z_kj = (j+1) Z_k,j+1
        - ``reconstruction``:         A = sum_k (lam_k Z_k0 + Z_k1)
        """
        a = self.source
        sp = self.spectrum
        n = sp.source_dim
        eye = identity(n)
        proj = {k: self.parts[(k, 0)] for k in range(1, sp.s + 1)}

        idem = max(
            frob(z @ z - z) / max(1.0, frob(z) ** 2) for z in proj.values()
        )
        comm = max(
            frob(a @ z - z @ a) / max(1.0, frob(a) * frob(z))
            for z in self.parts.values()
        )
        total = sum(proj.values())
        resolution = frob(total - eye) / max(1.0, max(frob(z) for z in proj.values()))
        orth = 0.0
        for k, zk in proj.items():
            for l, zl in proj.items():
                if k != l:
                    r = frob(zk @ zl) / max(1.0, frob(zk) * frob(zl))
                    orth = max(orth, r)
        annihilation = 0.0
        ladder = 0.0
        recon_sum = np.zeros((n, n), dtype=complex)
        for k in range(1, sp.s + 1):
            lam = sp.eigenvalues[k - 1]
            nu = sp.indices[k - 1]
            shifted = a - lam * eye
            killer = mat_pow(shifted, nu)
            r = frob(killer @ proj[k]) / max(1.0, frob(killer) * frob(proj[k]))
            annihilation = max(annihilation, r)
            for j in range(nu - 1):
                zj, zj1 = self.parts[(k, j)], self.parts[(k, j + 1)]
                r = frob(shifted @ zj - (j + 1) * zj1) / max(1.0, frob(shifted) * frob(zj))
                ladder = max(ladder, r)
            recon_sum += lam * proj[k]
            if nu > 1:
                recon_sum += self.parts[(k, 1)]
        reconstruction = frob(a - recon_sum) / max(1.0, frob(a))

        return {
            "idempotency": idem,
            "commutation": comm,
            "resolution_of_identity": resolution,
            "orthogonality": orth,
            "annihilation": annihilation,
            "ladder": ladder,
            "reconstruction": reconstruction,
        }


def _guard(m: np.ndarray, cfg: ToleranceConfig, what: str) -> np.ndarray:
    limit = 1e12 / cfg.verify_tol
    norm = frob(m)
    if not np.isfinite(norm) or norm > limit:
        raise ConditioningError(
            f"{what} has Frobenius norm {norm:.3e}, beyond the conditioning guard "
            f"{limit:.3e}; the eigenvalue ratios are too extreme for these exponents — "
            "try the 'minimal' exponent policy or supply a better-conditioned spectrum"
        )
    return m


def _poly_factor(m: np.ndarray, inner: int, outer: int, cfg: ToleranceConfig) -> np.ndarray:
    """(I - m^inner)^outer, by powering m, subtracting from I, powering again.

    Never expanded as a polynomial: staged powering keeps the count of
    large-norm intermediates minimal.
    """
    powered = _guard(mat_pow(m, inner), cfg, "inner matrix power")
    return _guard(mat_pow(identity(m.shape[0]) - powered, outer), cfg, "product factor")


def _check_pair(a: np.ndarray, sp: Spectrum) -> None:
    if sp.source_dim != a.shape[0]:
        raise PreconditionError(
            f"spectrum describes a {sp.source_dim}x{sp.source_dim} matrix, "
            f"got {a.shape[0]}x{a.shape[0]}"
        )


def eigenprojection_zero(a, sp: Spectrum, cfg: ToleranceConfig | None = None) -> np.ndarray:
    """Eigenprojection of ``a`` at eigenvalue 0.

    Product of ``(I - (A/lam_i)^u)^(u_i)`` over the nonzero eigenvalues, in
    position order. The empty product (every eigenvalue zero, i.e. a
    nilpotent matrix) is exactly I; for a nonsingular matrix every factor
    annihilates its own eigenspace and the result is numerically zero.
    """
    a = as_matrix(a)
    cfg = cfg or DEFAULT_TOLERANCES
    _check_pair(a, sp)
    z = identity(a.shape[0])
    for pos in range(sp.s):
        lam = sp.eigenvalues[pos]
        if lam == 0:
            continue
        z = _guard(z @ _poly_factor(a / lam, sp.u, sp.exponents[pos], cfg), cfg, "running product")
    return z


def _component_prefix(a: np.ndarray, sp: Spectrum, k: int, cfg: ToleranceConfig) -> np.ndarray:
    """The j-independent product prefix of the component at position k."""
    lam_k = sp.eigenvalues[k - 1]
    u_k = sp.exponents[k - 1]
    shifted = a - lam_k * identity(a.shape[0])
    z = identity(a.shape[0])
    for pos in range(sp.s):
        if pos == k - 1:
            continue
        ratio = sp.eigenvalues[pos] - lam_k
        z = _guard(
            z @ _poly_factor(shifted / ratio, u_k, sp.exponents[pos], cfg),
            cfg,
            "running product",
        )
    return z


def _order_check(sp: Spectrum, k: int, j: int) -> None:
    if not 1 <= k <= sp.s:
        raise PreconditionError(f"position k={k} out of range 1..{sp.s}")
    nu = sp.indices[k - 1]
    if not 0 <= j <= nu - 1:
        raise PreconditionError(f"order j={j} out of range 0..{nu - 1} at position {k}")
    if j > MAX_COMPONENT_ORDER:
        raise PreconditionError(
            f"order j={j} exceeds the supported cap {MAX_COMPONENT_ORDER} "
            "(floating-point factorials degrade beyond it)"
        )


def component(a, sp: Spectrum, k: int, j: int, cfg: ToleranceConfig | None = None) -> np.ndarray:
    """The order-j component of ``a`` at its k-th eigenvalue (k is 1-based).

    For j = 0 this is the eigenprojection at that eigenvalue: idempotent,
    commuting with ``a``. Higher orders carry the nilpotent structure,
    scaled by 1/j!.
    """
    a = as_matrix(a)
    cfg = cfg or DEFAULT_TOLERANCES
    _check_pair(a, sp)
    _order_check(sp, k, j)
    prefix = _component_prefix(a, sp, k, cfg)
    if j == 0:
        return prefix
    shifted = a - sp.eigenvalues[k - 1] * identity(a.shape[0])
    return prefix @ mat_pow(shifted, j) / float(math.factorial(j))


def all_components(a, sp: Spectrum, cfg: ToleranceConfig | None = None) -> ComponentSet:
    """Every component of ``a``: positions k = 1..s, orders j = 0..index_k - 1.

    The per-position product prefix is computed once and shared across j —
    only the trailing ``(1/j!) (A - lam_k I)^j`` factor differs — which is
    faster and keeps all components of one eigenvalue mutually consistent.
    """
    a = as_matrix(a)
    cfg = cfg or DEFAULT_TOLERANCES
    _check_pair(a, sp)
    parts = {}
    for k in range(1, sp.s + 1):
        nu = sp.indices[k - 1]
        _order_check(sp, k, nu - 1)
        prefix = _component_prefix(a, sp, k, cfg)
        shifted = a - sp.eigenvalues[k - 1] * identity(a.shape[0])
        tail = identity(a.shape[0])
        factorial = 1.0
        for j in range(nu):
            if j > 0:
                tail = tail @ shifted
                factorial *= j
            parts[(k, j)] = prefix @ tail / factorial
    return ComponentSet(source=a, spectrum=sp, parts=parts)


def lagrange_projector(a, sp: Spectrum, k: int, cfg: ToleranceConfig | None = None) -> np.ndarray:
    """Classical Lagrange-product projector, for diagonalizable matrices only.

    Requires every index to equal 1, and evaluates
    ``prod_{i != k} (A - lam_i I) / (lam_k - lam_i)`` — the textbook
    interpolation form that the general component product reduces to in
    this case. Agrees with ``component(a, sp, k, 0)`` to working accuracy.
    """
    a = as_matrix(a)
    cfg = cfg or DEFAULT_TOLERANCES
    _check_pair(a, sp)
    if not 1 <= k <= sp.s:
        raise PreconditionError(f"position k={k} out of range 1..{sp.s}")
    bad = [i + 1 for i, nu in enumerate(sp.indices) if nu != 1]
    if bad:
        raise PreconditionError(
            f"Lagrange projector needs every index equal to 1; positions {bad} violate that"
        )
    lam_k = sp.eigenvalues[k - 1]
    eye = identity(a.shape[0])
    z = eye
    for pos in range(sp.s):
        if pos == k - 1:
            continue
        lam_i = sp.eigenvalues[pos]
        z = _guard(z @ ((a - lam_i * eye) / (lam_k - lam_i)), cfg, "running product")
    return z


def eigenprojection_residuals(a, sp: Spectrum, z: np.ndarray) -> dict:
    """Residuals of the identities the eigenprojection at 0 must satisfy.

    Same normalization convention as :meth:`ComponentSet.residuals`:
    idempotency Z^2 = Z, commutation AZ = ZA, and annihilation
    A^(ind A) @ Z = 0 (which for a nonsingular matrix degenerates to
    Z itself being zero).
    """
    a = as_matrix(a)
    killer = mat_pow(a, sp.ind_a)
    return {
        "idempotency": frob(z @ z - z) / max(1.0, frob(z) ** 2),
        "commutation": frob(a @ z - z @ a) / max(1.0, frob(a) * frob(z)),
        "annihilation": frob(killer @ z) / max(1.0, frob(killer) * frob(z)),
    }
