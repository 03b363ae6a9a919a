"""Spectral structure of a matrix: distinct eigenvalues, multiplicities,
indices, and the exponents that drive the component product formulas.

Eigenvalues are kept in a deterministic order (descending magnitude, ties
by ascending argument) so that positions are stable across runs. Clusters
whose centroid lies within the clustering radius of zero snap to exactly 0:
the projector formulas branch on zero-versus-nonzero, so that distinction
must be crisp.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .exceptions import ClusteringError, ConvergenceError, PreconditionError
from .linalg import DEFAULT_TOLERANCES, ToleranceConfig, as_matrix, frob, identity, rank_numeric

__all__ = [
    "Spectrum",
    "eigenvalues_raw",
    "cluster_spectrum",
    "eigen_index",
    "analyze",
    "spectrum_from_data",
    "effective_cluster_radius",
    "replace_eigenvalue",
]


def canonical_order(values) -> np.ndarray:
    """Sorting permutation: descending magnitude, ties by ascending argument."""
    values = np.asarray(values, dtype=complex)
    return np.lexsort((np.angle(values), -np.abs(values)))


def effective_cluster_radius(values, cfg: ToleranceConfig | None = None) -> float:
    """Clustering radius scaled by the magnitude of the spectrum.

    The configured radius is relative; the effective one is
    ``eig_cluster_radius * max(1, max |value|)``.
    """
    cfg = cfg or DEFAULT_TOLERANCES
    values = np.asarray(values, dtype=complex)
    scale = max(1.0, float(np.abs(values).max())) if values.size else 1.0
    return cfg.eig_cluster_radius * scale


@dataclass(frozen=True)
class Spectrum:
    """Distinct eigenvalues plus the integer data the component formulas need.

    Fields are parallel tuples over positions 1..s (1-based in the public
    API, matching the usual mathematical numbering):

    - ``eigenvalues``: pairwise distinct, canonically ordered
    - ``multiplicities``: algebraic multiplicities, summing to ``source_dim``
    - ``indices``: size of the largest Jordan block per eigenvalue
    - ``exponents``: per-eigenvalue powers, each at least the index
    - ``ind_a``: index of eigenvalue 0 (0 when the matrix is nonsingular)
    - ``u``: inner power used by the projector-at-zero product, >= ind_a
    """

    eigenvalues: tuple
    multiplicities: tuple
    indices: tuple
    exponents: tuple
    ind_a: int
    u: int
    source_dim: int

    @property
    def s(self) -> int:
        """Number of distinct eigenvalues."""
        return len(self.eigenvalues)

    def position_of(self, value, tol: float = 0.0) -> int:
        """1-based position of the eigenvalue nearest ``value``.

        Raises :class:`PreconditionError` when the nearest one is farther
        than ``tol`` away.
        """
        dist = np.abs(np.asarray(self.eigenvalues, dtype=complex) - complex(value))
        pos = int(dist.argmin())
        if dist[pos] > tol:
            raise PreconditionError(f"{value!r} is not an eigenvalue of this spectrum")
        return pos + 1

    def validate(self, cfg: ToleranceConfig | None = None) -> "Spectrum":
        """Check the structural invariants; returns self for chaining."""
        cfg = cfg or DEFAULT_TOLERANCES
        s = self.s
        if s == 0:
            raise PreconditionError("spectrum must contain at least one eigenvalue")
        for field in (self.multiplicities, self.indices, self.exponents):
            if len(field) != s:
                raise PreconditionError("spectrum fields must all have one entry per eigenvalue")
        if sum(self.multiplicities) != self.source_dim:
            raise PreconditionError(
                f"multiplicities sum to {sum(self.multiplicities)}, expected {self.source_dim}"
            )
        for i, (m, nu, ue) in enumerate(zip(self.multiplicities, self.indices, self.exponents)):
            if not 1 <= nu <= m:
                raise PreconditionError(
                    f"index {nu} out of range 1..{m} at position {i + 1}"
                )
            if ue < nu:
                raise PreconditionError(
                    f"exponent {ue} smaller than index {nu} at position {i + 1}"
                )
        values = np.asarray(self.eigenvalues, dtype=complex)
        radius = effective_cluster_radius(values, cfg)
        for i in range(s):
            for j in range(i + 1, s):
                if abs(values[i] - values[j]) <= 2.0 * radius:
                    raise ClusteringError(
                        f"eigenvalues {values[i]} and {values[j]} are closer than twice the "
                        "clustering radius; lower the radius or supply the spectrum explicitly"
                    )
        zero = np.nonzero(values == 0)[0]
        expected_ind = int(self.indices[zero[0]]) if zero.size else 0
        if self.ind_a != expected_ind:
            raise PreconditionError(
                f"ind_a is {self.ind_a} but the zero eigenvalue data implies {expected_ind}"
            )
        if self.u < max(self.ind_a, 1):
            raise PreconditionError(f"u must be at least max(ind_a, 1) = {max(self.ind_a, 1)}")
        return self

    def with_exponents(self, exponents) -> "Spectrum":
        """Same eigenvalues, multiplicities and indices, new exponent choice.

        ``exponents`` is ``"minimal"`` (exponent = index, u = max(ind_a, 1)),
        ``"worst_case"`` (exponent = multiplicity, u = dimension), or an
        explicit sequence aligned with the eigenvalue order.
        """
        ulist, u = _exponent_choice(
            exponents, self.multiplicities, self.indices, self.ind_a, self.source_dim,
            zero_pos=_zero_position(self.eigenvalues),
        )
        return replace(self, exponents=ulist, u=u)

    def shifted(self, k: int) -> "Spectrum":
        """Spectrum of ``A - lambda_k I`` given this spectrum of ``A``.

        Eigenvalues shift by ``-lambda_k`` (position k becomes exactly 0),
        multiplicities, indices and exponents are unchanged, and the inner
        power ``u`` becomes the k-th exponent: the shifted matrix has index
        equal to the k-th index, which that exponent dominates.
        """
        if not 1 <= k <= self.s:
            raise PreconditionError(f"position k={k} out of range 1..{self.s}")
        lam = self.eigenvalues[k - 1]
        values = [v - lam for v in self.eigenvalues]
        values[k - 1] = 0j
        order = canonical_order(values)
        return Spectrum(
            eigenvalues=tuple(complex(values[i]) for i in order),
            multiplicities=tuple(self.multiplicities[i] for i in order),
            indices=tuple(self.indices[i] for i in order),
            exponents=tuple(self.exponents[i] for i in order),
            ind_a=int(self.indices[k - 1]),
            u=int(self.exponents[k - 1]),
            source_dim=self.source_dim,
        )


def _zero_position(values) -> int | None:
    """0-based position of the exact-zero eigenvalue, or None."""
    for i, v in enumerate(values):
        if v == 0:
            return i
    return None


def _exponent_choice(exponents, multiplicities, indices, ind_a, n, zero_pos):
    """Resolve an exponent policy into (per-eigenvalue tuple, inner power u)."""
    if exponents == "minimal":
        return tuple(int(v) for v in indices), max(int(ind_a), 1)
    if exponents == "worst_case":
        return tuple(int(m) for m in multiplicities), int(n)
    if isinstance(exponents, str):
        raise PreconditionError(
            f"unknown exponent policy {exponents!r}; use 'minimal', 'worst_case', "
            "or an explicit integer sequence"
        )
    ulist = tuple(int(v) for v in exponents)
    if len(ulist) != len(indices):
        raise PreconditionError(
            f"expected {len(indices)} explicit exponents, got {len(ulist)}"
        )
    for i, (ue, nu) in enumerate(zip(ulist, indices)):
        if ue < nu:
            raise PreconditionError(
                f"explicit exponent {ue} at position {i + 1} violates the "
                f"lower bound {nu} set by that eigenvalue's index"
            )
    u = ulist[zero_pos] if zero_pos is not None else 1
    if u < max(int(ind_a), 1):
        raise PreconditionError(f"inner power {u} must be at least max(ind_a, 1)")
    return ulist, u


def eigenvalues_raw(a, cfg: ToleranceConfig | None = None) -> np.ndarray:
    """All n eigenvalues of ``a``, counted with algebraic multiplicity.

    Computed by LAPACK's Hessenberg reduction followed by shifted QR
    iteration (``numpy.linalg.eigvals``). For a normal matrix with well
    separated eigenvalues each value is accurate to roughly machine
    precision times the Frobenius norm; clusters of a defective eigenvalue
    scatter like eps**(1/index), which is why clustering radii are
    configurable.
    """
    a = as_matrix(a)
    try:
        return np.linalg.eigvals(a)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(
            f"eigenvalue iteration did not converge within the LAPACK cap of "
            f"roughly 30 sweeps per eigenvalue for this {a.shape[0]}x{a.shape[0]} "
            f"matrix: {a!r}"
        ) from exc


def cluster_spectrum(values, cfg: ToleranceConfig | None = None):
    """Greedy agglomerative clustering of approximate eigenvalues.

    Values are swept in canonical order; each joins the first existing
    cluster whose multiplicity-weighted centroid lies within the effective
    radius, else starts a new cluster. Centroids within the radius of zero
    snap to exactly 0. Returns ``(distinct_values, multiplicities)`` in
    canonical order.

    Raises :class:`ClusteringError` when two final centroids end up closer
    than twice the radius — the clustering is then ambiguous and a
    different radius (or a user-supplied spectrum) is needed.
    """
    vals = np.asarray(values, dtype=complex).ravel()
    if vals.size == 0:
        raise PreconditionError("cannot cluster an empty list of eigenvalues")
    cfg = cfg or DEFAULT_TOLERANCES
    radius = effective_cluster_radius(vals, cfg)

    centroids: list[complex] = []
    counts: list[int] = []
    for v in vals[canonical_order(vals)]:
        for idx, c in enumerate(centroids):
            if abs(v - c) <= radius:
                counts[idx] += 1
                centroids[idx] = c + (v - c) / counts[idx]
                break
        else:
            centroids.append(complex(v))
            counts.append(1)

    cents = np.array(centroids, dtype=complex)
    cents[np.abs(cents) <= radius] = 0.0
    for i in range(len(cents)):
        for j in range(i + 1, len(cents)):
            if abs(cents[i] - cents[j]) <= 2.0 * radius:
                raise ClusteringError(
                    f"ambiguous clustering: centroids {cents[i]} and {cents[j]} are "
                    "closer than twice the clustering radius; adjust the radius or "
                    "supply the spectrum explicitly"
                )
    order = canonical_order(cents)
    return cents[order], np.array(counts, dtype=int)[order]


def eigen_index(a, lam, cfg: ToleranceConfig | None = None) -> int:
    """Smallest k with rank((A - lam I)^k) == rank((A - lam I)^(k+1)).

    Returns 0 iff ``lam`` is not an eigenvalue; never exceeds n (the rank
    sequence plateaus by then). The shifted matrix is renormalized before
    each powering step — rank is scale-invariant — so high powers cannot
    over- or underflow.
    """
    a = as_matrix(a)
    cfg = cfg or DEFAULT_TOLERANCES
    n = a.shape[0]
    b = a - complex(lam) * identity(n)
    norm = frob(b)
    if norm <= cfg.rank_rel_threshold * max(1.0, frob(a)):
        return 1  # a is lam * I up to noise
    b = b / norm
    prev_rank = n
    power = identity(n)
    for k in range(n + 1):
        power = power @ b
        norm = frob(power)
        if norm <= cfg.rank_rel_threshold:
            # product of unit-norm factors collapsed to the noise floor:
            # the power is the numerically zero map
            r = 0
        else:
            power = power / norm
            r = rank_numeric(power, cfg)
        if r == prev_rank:
            return k
        prev_rank = r
    return n


def analyze(a, cfg: ToleranceConfig | None = None, exponents="minimal") -> Spectrum:
    """Full spectral structure of ``a``.

    ``exponents`` selects how the product-formula powers are chosen:

    - ``"minimal"``: exponent = index, u = max(ind A, 1). Smallest valid
      powers, at the cost of one rank-plateau search per eigenvalue.
    - ``"worst_case"``: exponent = multiplicity, u = n. Always valid and
      needs no rank computations (indices are recorded as their
      multiplicity upper bounds), trading larger products for robustness.
    - an explicit sequence of s integers aligned with the canonical
      eigenvalue order, validated against the computed indices.
    """
    a = as_matrix(a)
    cfg = cfg or DEFAULT_TOLERANCES
    values, mults = cluster_spectrum(eigenvalues_raw(a, cfg), cfg)
    if exponents == "worst_case":
        indices = [int(m) for m in mults]
    else:
        indices = []
        for v, m in zip(values, mults):
            nu = eigen_index(a, v, cfg)
            if nu < 1:
                raise ClusteringError(
                    f"clustered value {v} is not an eigenvalue at the current rank "
                    "threshold; the clustering radius is likely too large"
                )
            if nu > m:
                raise ClusteringError(
                    f"index {nu} of eigenvalue {v} exceeds its clustered multiplicity "
                    f"{m}; the clustering radius is likely too small"
                )
            indices.append(nu)
    return _assemble(values, mults, indices, a.shape[0], cfg, exponents)


def spectrum_from_data(
    eigenvalues,
    multiplicities,
    indices,
    n: int | None = None,
    cfg: ToleranceConfig | None = None,
    exponents="minimal",
) -> Spectrum:
    """Build a validated Spectrum from externally known data.

    This bypasses the eigenvalue solver entirely — for exactly-known or
    ill-conditioned spectra. Values within the effective clustering radius
    of zero are snapped to exactly 0; everything is re-sorted canonically.
    ``n`` defaults to the multiplicity sum.
    """
    cfg = cfg or DEFAULT_TOLERANCES
    values = np.asarray(eigenvalues, dtype=complex).ravel()
    mults = [int(m) for m in np.asarray(multiplicities).ravel()]
    inds = [int(v) for v in np.asarray(indices).ravel()]
    if not (len(values) == len(mults) == len(inds)):
        raise PreconditionError("eigenvalues, multiplicities and indices must have equal length")
    if n is None:
        n = sum(mults)
    radius = effective_cluster_radius(values, cfg)
    values = values.copy()
    values[np.abs(values) <= radius] = 0.0
    order = canonical_order(values)
    values = values[order]
    mults = [mults[i] for i in order]
    inds = [inds[i] for i in order]
    return _assemble(values, mults, inds, int(n), cfg, exponents)


def _assemble(values, mults, indices, n, cfg, exponents) -> Spectrum:
    zero_pos = _zero_position(values)
    ind_a = int(indices[zero_pos]) if zero_pos is not None else 0
    ulist, u = _exponent_choice(exponents, mults, indices, ind_a, n, zero_pos)
    sp = Spectrum(
        eigenvalues=tuple(complex(v) for v in values),
        multiplicities=tuple(int(m) for m in mults),
        indices=tuple(int(v) for v in indices),
        exponents=ulist,
        ind_a=ind_a,
        u=int(u),
        source_dim=int(n),
    )
    return sp.validate(cfg)


def replace_eigenvalue(sp: Spectrum, k: int, value) -> Spectrum:
    """Copy of ``sp`` with the k-th eigenvalue relabeled as ``value``.

    Used to snap a centroid known to be exact (0 or, for stochastic
    matrices, 1) onto that exact value; the cluster's multiplicity, index
    and exponent are kept. The result is re-sorted canonically.
    """
    if not 1 <= k <= sp.s:
        raise PreconditionError(f"position k={k} out of range 1..{sp.s}")
    values = list(sp.eigenvalues)
    values[k - 1] = complex(value)
    order = canonical_order(values)
    values = tuple(complex(values[i]) for i in order)
    indices = tuple(sp.indices[i] for i in order)
    zero_pos = _zero_position(values)
    ind_a = int(indices[zero_pos]) if zero_pos is not None else 0
    if sp.u < max(ind_a, 1):
        raise PreconditionError(
            f"relabeling position {k} to {value!r} would require u >= {ind_a}, have {sp.u}"
        )
    return replace(
        sp,
        eigenvalues=values,
        multiplicities=tuple(sp.multiplicities[i] for i in order),
        indices=indices,
        exponents=tuple(sp.exponents[i] for i in order),
        ind_a=ind_a,
    )
