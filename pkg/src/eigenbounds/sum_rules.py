"""Bethe-type sum rules for torus spectra.

For a dual-lattice vector q (integer vector m0 in reduced units) the
symmetrized transition weights

    w_kj = 1/2 (|<exp(-i q.x) phi_j, phi_k>|^2 + |<exp(+i q.x) phi_j, phi_k>|^2)

form a doubly stochastic matrix over the exact eigenbasis, with the first and
second moment rules

    sum_k (l_k - l_j) w_kj   = alpha |q|^2,
    sum_k (l_k - l_j)^2 w_kj = alpha^2 (|q|^4 + 4 ||q . grad phi_j||^2).

On a truncated plane-wave basis the rules are exact only for eigenvectors
whose coefficient mass stays clear of the box boundary; the interior set
below encodes that safety margin.
"""

from dataclasses import dataclass

import numpy as np

from .reports import IdentityResidualReport, identity_report
from .torus import SpectrumResult, shift_matrix


@dataclass(frozen=True, eq=False)
class OverlapMatrix:
    """Symmetrized squared overlaps w_kj for one dual-lattice vector.

    Entries are indexed [k, j] over the computed spectrum.  ``interior`` lists
    eigenvector indices whose dominant mode keeps a per-axis margin of
    |m0| plus twice the potential's harmonic reach from the box edge; row sums
    over those columns are truncation-exact.  Entries are invariant under
    eigenvector phase changes but do depend on the basis chosen inside
    degenerate clusters.
    """

    m0: tuple[int, ...]
    entries: np.ndarray
    interior: np.ndarray
    row_sums: np.ndarray


def overlap_matrix(spec: SpectrumResult, m0, margin=None) -> OverlapMatrix:
    m0 = np.asarray(np.atleast_1d(m0), dtype=int)
    if m0.shape != (spec.geometry.d,) or not m0.any():
        raise ValueError(f"m0 must be a nonzero integer vector of length {spec.geometry.d}")
    s = shift_matrix(spec.basis, m0)
    c = spec.vectors
    fwd = c.conj().T @ (s @ c)       # fwd[k, j] = <exp(-iq.x) phi_j, phi_k>
    bwd = c.conj().T @ (s.T @ c)
    w = 0.5 * (np.abs(fwd) ** 2 + np.abs(bwd) ** 2)

    if margin is None:
        harm = np.asarray(spec.potential.max_harmonic) if spec.potential \
            else np.zeros(spec.geometry.d, dtype=int)
        margin = np.abs(m0) + 2 * harm
    else:
        margin = np.asarray(np.atleast_1d(margin), dtype=int)
    dom = spec.dominant_modes()
    inner = np.all(np.abs(dom) <= np.asarray(spec.basis.n_max) - margin, axis=1)
    interior = np.where(inner)[0]
    if interior.size == 0:
        raise ValueError("no interior eigenvectors at this cutoff; enlarge the basis")
    return OverlapMatrix(m0=tuple(int(v) for v in m0), entries=w,
                         interior=interior, row_sums=w.sum(axis=0))


@dataclass(frozen=True)
class MomentChecks:
    """First and second moment sums for one interior eigenvector."""

    m1: float
    m1_target: float
    m1a_residual: float
    m2_lhs: float
    m2_rhs: float


def moment_sum_rules(w: OverlapMatrix, spec: SpectrumResult, j: int) -> MomentChecks:
    """Evaluate the moment rules at interior index j.

    m2_rhs is computed from the eigenvector coefficients (the independent
    route); m2_lhs sums the weights against squared eigenvalue differences.
    """
    if j not in w.interior:
        raise ValueError(f"index {j} is not in the interior set")
    lam = spec.eigenvalues
    col = w.entries[:, j]
    diff = lam - lam[j]
    qvec = np.asarray(w.m0) * spec.geometry.dual_basis
    q2 = float(np.sum(qvec ** 2))
    alpha = spec.alpha

    m1 = float(np.sum(diff * col))
    m1_target = alpha * q2
    m1a = abs(lam[j] - (float(np.sum(lam * col)) - m1_target))

    m2 = float(np.sum(diff ** 2 * col))
    kappa = spec.basis.modes * spec.geometry.dual_basis + spec.k
    grad = float(np.sum(np.abs(spec.vectors[:, j]) ** 2 * (kappa @ qvec) ** 2))
    m2_rhs = alpha ** 2 * (q2 ** 2 + 4.0 * grad)
    return MomentChecks(m1=m1, m1_target=m1_target, m1a_residual=m1a,
                        m2_lhs=m2, m2_rhs=m2_rhs)


@dataclass(frozen=True)
class LeadingSetReport:
    """Master identity over the leading index set, with the sign of the
    interaction side for z inside the spectral gap."""

    report: IdentityResidualReport
    rhs_value: float
    rhs_nonpositive: bool


def leading_identity_residual(spec: SpectrumResult, m0, n_leading: int, z: float,
                              tolerance: float = 1e-5,
                              w: OverlapMatrix | None = None) -> LeadingSetReport:
    """Check the trace identity over J = the lowest n_leading eigenvalues.

    lhs uses the closed commutator forms (alpha |q|^2 and the gradient
    moments); rhs is the explicit double sum over the computed complement.
    Truncation, not algebra, limits the agreement, so the default tolerance
    is loose; reports carry the rhs sign, which must be <= 0 for
    z in [lambda_N, lambda_{N+1}].
    """
    if w is None:
        w = overlap_matrix(spec, m0)
    if n_leading < 1 or n_leading >= spec.size:
        raise ValueError(f"n_leading must be in 1..{spec.size - 1}")
    missing = [j for j in range(n_leading) if j not in w.interior]
    if missing:
        raise ValueError(f"leading indices {missing} are not interior at this cutoff")
    lam = spec.eigenvalues
    qvec = np.asarray(w.m0) * spec.geometry.dual_basis
    q2 = float(np.sum(qvec ** 2))
    alpha = spec.alpha
    kappa = spec.basis.modes * spec.geometry.dual_basis + spec.k
    proj = (kappa @ qvec) ** 2

    dz = z - lam[:n_leading]
    grads = np.array([np.sum(np.abs(spec.vectors[:, j]) ** 2 * proj)
                      for j in range(n_leading)])
    lhs = alpha * q2 * float(np.sum(dz ** 2)) \
        - float(np.sum(dz * (alpha ** 2 * (q2 ** 2 + 4.0 * grads))))

    dz_all = z - lam
    pair = np.outer(dz[:n_leading], dz_all[n_leading:]) \
        * (lam[None, n_leading:] - lam[:n_leading, None])
    rhs = float(np.sum(pair * w.entries[n_leading:, :n_leading].T))
    in_gap = lam[n_leading - 1] <= z <= lam[n_leading]
    rhs_nonpositive = (not in_gap) or rhs <= tolerance * max(1.0, abs(rhs))
    return LeadingSetReport(report=identity_report(lhs, rhs, tolerance),
                            rhs_value=rhs,
                            rhs_nonpositive=rhs_nonpositive)
