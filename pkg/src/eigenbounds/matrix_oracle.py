"""Dense-matrix ground truth for commutator trace identities and gap bounds.

Every check here works on an explicit finite Hermitian matrix H together with
an auxiliary square matrix G (general, unitary, or self-adjoint).  With
P a spectral projector of H and the pair

    A = (1 - P) G P,      B = P G (1 - P),

the traces of (z - H)-weighted products of G, [H, G] = HG - GH and the second
commutators satisfy a closed two-sided identity for every real z; in the
eigenbasis of H the same identity becomes a Bethe-type sum rule over the
transition weights |<G phi_j, phi_k>|^2.  When P separates the spectrum
(H P <= lambda < Lambda <= H (1 - P)) the identity degrades to a one-sided
gap inequality, and integrating that inequality in z gives the smooth-function
variant for f(t) = t^sigma with sigma >= 3.

These dense evaluations are the oracle for the structured torus and sphere
models elsewhere in the package: every side of every identity is computed
independently by direct matrix arithmetic, never by reusing the other side.
"""

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .reports import IdentityResidualReport, identity_report, inequality_report

HERMITICITY_TOL = 1e-13
THRESHOLD_SEPARATION = 1e-9

G_KINDS = ("general", "unitary", "selfadjoint")


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """[A, B] = AB - BA for square matrices of equal dimension."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape != b.shape:
        raise ValueError(f"commutator needs equal square matrices, got {a.shape} and {b.shape}")
    return a @ b - b @ a


@dataclass(frozen=True, eq=False)
class HermitianMatrixModel:
    """A Hermitian matrix H with an auxiliary matrix G of the same dimension."""

    h: np.ndarray
    g: np.ndarray
    g_kind: str = "general"

    def __post_init__(self):
        h = np.asarray(self.h, dtype=complex)
        g = np.asarray(self.g, dtype=complex)
        if h.ndim != 2 or h.shape[0] != h.shape[1]:
            raise ValueError(f"H must be square, got shape {h.shape}")
        if g.shape != h.shape:
            raise ValueError(f"G must match H, got {g.shape} vs {h.shape}")
        if self.g_kind not in G_KINDS:
            raise ValueError(f"g_kind must be one of {G_KINDS}, got {self.g_kind!r}")
        tol = HERMITICITY_TOL * max(1.0, float(h.shape[0]))
        herm = np.linalg.norm(h - h.conj().T) / max(1.0, np.linalg.norm(h))
        if herm > tol:
            raise ValueError(f"H is not Hermitian: relative defect {herm:.3e}")
        if self.g_kind == "unitary":
            defect = np.linalg.norm(g @ g.conj().T - np.eye(g.shape[0]))
            if defect > tol:
                raise ValueError(f"G is not unitary: defect {defect:.3e}")
        if self.g_kind == "selfadjoint":
            defect = np.linalg.norm(g - g.conj().T) / max(1.0, np.linalg.norm(g))
            if defect > tol:
                raise ValueError(f"G is not self-adjoint: relative defect {defect:.3e}")
        object.__setattr__(self, "h", h)
        object.__setattr__(self, "g", g)

    @property
    def dim(self) -> int:
        return self.h.shape[0]

    @cached_property
    def eig(self) -> tuple[np.ndarray, np.ndarray]:
        """Ascending eigenvalues and the (deterministic) eigenvector matrix."""
        try:
            lam, vec = np.linalg.eigh(self.h)
        except np.linalg.LinAlgError as exc:
            raise RuntimeError(f"eigendecomposition failed for dim {self.dim}") from exc
        return lam, vec


@dataclass(frozen=True)
class ProjectorSpec:
    """Spectral projector of H, by eigenvalue positions or by threshold.

    Index mode selects explicit 0-based positions into the ascending
    eigenvalue ordering.  Threshold mode selects every eigenvalue strictly
    below z; z must stay at least 1e-9 away from the spectrum so the selected
    subspace is unambiguous.
    """

    mode: str = "indices"
    indices: tuple[int, ...] = ()
    threshold: float = 0.0

    @classmethod
    def lowest(cls, n: int) -> "ProjectorSpec":
        return cls(mode="indices", indices=tuple(range(n)))

    @classmethod
    def below(cls, z: float) -> "ProjectorSpec":
        return cls(mode="threshold", threshold=z)

    def resolve(self, eigenvalues: np.ndarray) -> np.ndarray:
        n = len(eigenvalues)
        if self.mode == "indices":
            idx = np.array(sorted(set(self.indices)), dtype=int)
            if idx.size and (idx[0] < 0 or idx[-1] >= n):
                raise ValueError(f"projector indices out of range 0..{n - 1}: {self.indices}")
            return idx
        if self.mode == "threshold":
            gap = np.min(np.abs(eigenvalues - self.threshold))
            if gap < THRESHOLD_SEPARATION:
                raise ValueError(
                    f"threshold {self.threshold} is within {gap:.3e} of an eigenvalue; "
                    "projector would be ambiguous")
            return np.where(eigenvalues < self.threshold)[0]
        raise ValueError(f"unknown projector mode {self.mode!r}")


# ---------------------------------------------------------------------------
# random ensembles (seeded, reproducible)
# ---------------------------------------------------------------------------

def gaussian_hermitian(dim: int, rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
    a = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return scale * (a + a.conj().T) / 2.0


def haar_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Unitary from the QR of a complex Gaussian matrix, phases fixed."""
    a = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(a)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def random_model(dim: int, kind: str = "general",
                 rng: np.random.Generator | int | None = None) -> HermitianMatrixModel:
    rng = np.random.default_rng(rng)
    h = gaussian_hermitian(dim, rng)
    if kind == "general":
        g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    elif kind == "unitary":
        g = haar_unitary(dim, rng)
    elif kind == "selfadjoint":
        g = gaussian_hermitian(dim, rng)
    else:
        raise ValueError(f"unknown G kind {kind!r}")
    return HermitianMatrixModel(h=h, g=g, g_kind=kind)


def random_gapped_model(dim: int, rng: np.random.Generator | int | None = None,
                        low: tuple[float, float] = (0.0, 1.0),
                        high: tuple[float, float] = (2.0, 3.0),
                        kind: str = "general") -> tuple[HermitianMatrixModel, int, float, float]:
    """Random H with spectrum split between two bands, plus a random G.

    Returns (model, n_low, lambda_cap, lambda_floor) where n_low eigenvalues
    sit in the low band, lambda_cap is the largest of them and lambda_floor
    the smallest eigenvalue of the high band.
    """
    rng = np.random.default_rng(rng)
    n_low = dim // 2
    ev = np.concatenate([np.sort(rng.uniform(*low, n_low)),
                         np.sort(rng.uniform(*high, dim - n_low))])
    q = haar_unitary(dim, rng)
    h = (q * ev) @ q.conj().T
    h = (h + h.conj().T) / 2.0
    if kind == "general":
        g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    elif kind == "unitary":
        g = haar_unitary(dim, rng)
    else:
        g = gaussian_hermitian(dim, rng)
    model = HermitianMatrixModel(h=h, g=g, g_kind=kind)
    lam, _ = model.eig   # recomputed edges, so the gap precondition holds exactly
    return model, n_low, float(lam[n_low - 1]), float(lam[n_low])


# ---------------------------------------------------------------------------
# building blocks
# ---------------------------------------------------------------------------

def default_tolerance(model: HermitianMatrixModel) -> float:
    """Relative 1e-10 through dimension 16; beyond that, scaled linearly with
    dimension times a spectral condition estimate of H."""
    if model.dim <= 16:
        return 1e-10
    lam, _ = model.eig
    spread = float(np.max(np.abs(lam)))
    gaps = np.diff(lam)
    finest = float(np.min(gaps[gaps > 0])) if np.any(gaps > 0) else spread
    condition = max(1.0, spread / max(finest, 1e-300))
    return 1e-10 * (model.dim / 16.0) * min(condition, 1e4)


def _first_commutators(model: HermitianMatrixModel) -> tuple[np.ndarray, np.ndarray]:
    ch = commutator(model.h, model.g)
    chs = commutator(model.h, model.g.conj().T)
    return ch, chs


def _k_matrix(model, ch, chs) -> np.ndarray:
    """G* [H,G] + G [H,G*], the trace kernel of the identities."""
    return model.g.conj().T @ ch + model.g @ chs


def _m_matrix(ch, chs) -> np.ndarray:
    """[H,G*][H,G] + [H,G][H,G*]."""
    return chs @ ch + ch @ chs


def _projector_matrix(model: HermitianMatrixModel, idx: np.ndarray) -> np.ndarray:
    _, vec = model.eig
    vj = vec[:, idx]
    return vj @ vj.conj().T


def _shifted_sides(model, p_matrix, z) -> tuple[complex, complex]:
    ch, chs = _first_commutators(model)
    kmat = _k_matrix(model, ch, chs)
    mmat = _m_matrix(ch, chs)
    eye = np.eye(model.dim)
    zh = z * eye - model.h
    zh2 = zh @ zh
    lhs = np.trace(zh2 @ kmat @ p_matrix) + np.trace(zh @ mmat @ p_matrix)
    a = (eye - p_matrix) @ model.g @ p_matrix
    b = p_matrix @ model.g @ (eye - p_matrix)
    ah, bh = a.conj().T, b.conj().T
    rhs = (np.trace(zh @ a @ zh2 @ ah) - np.trace(zh @ ah @ zh2 @ a)
           + np.trace(zh @ bh @ zh2 @ b) - np.trace(zh @ b @ zh2 @ bh))
    return complex(lhs), complex(rhs)


# ---------------------------------------------------------------------------
# identity checks
# ---------------------------------------------------------------------------

def shifted_trace_residual(model: HermitianMatrixModel, projector: ProjectorSpec,
                           z: float, tolerance: float | None = None) -> IdentityResidualReport:
    """Both sides of the shifted trace identity at z (z = 0 is the unshifted form).

    lhs = tr((z-H)^2 (G*[H,G] + G[H,G*]) P) + tr((z-H)([H,G*][H,G] + [H,G][H,G*]) P)
    rhs = the A/B bracketing built from A = (1-P)GP and B = PG(1-P).
    """
    tolerance = default_tolerance(model) if tolerance is None else tolerance
    lam, _ = model.eig
    idx = projector.resolve(lam)
    p_matrix = _projector_matrix(model, idx)
    lhs, rhs = _shifted_sides(model, p_matrix, z)
    return identity_report(lhs, rhs, tolerance)


def eigenbasis_sum_rule_sides(model: HermitianMatrixModel, indices,
                              z: float) -> tuple[float, float]:
    """Second-commutator (sum-rule) form of the identity in the eigenbasis of H.

    lhs = 1/2 sum_{j in J} (z-l_j)^2 <([G*,[H,G]] + [G,[H,G*]]) phi_j, phi_j>
          - sum_{j in J} (z-l_j) (||[H,G] phi_j||^2 + ||[H,G*] phi_j||^2)
    rhs = sum_{j in J, k not in J} (z-l_j)(z-l_k)(l_k-l_j)
          (|<G phi_j, phi_k>|^2 + |<G* phi_j, phi_k>|^2)
    """
    lam, vec = model.eig
    in_j = np.zeros(model.dim, dtype=bool)
    in_j[np.asarray(list(indices), dtype=int)] = True
    if not in_j.any():
        raise ValueError("index set J must be nonempty")
    ch, chs = _first_commutators(model)
    second = commutator(model.g.conj().T, ch) + commutator(model.g, chs)
    sc = np.real(np.diagonal(vec.conj().T @ second @ vec))
    cn = np.sum(np.abs(ch @ vec) ** 2, axis=0)
    cns = np.sum(np.abs(chs @ vec) ** 2, axis=0)
    dz = z - lam
    lhs = 0.5 * np.sum(dz[in_j] ** 2 * sc[in_j]) - np.sum(dz[in_j] * (cn[in_j] + cns[in_j]))

    overlap = vec.conj().T @ model.g @ vec      # overlap[k, j] = <G phi_j, phi_k>
    w2 = np.abs(overlap) ** 2
    pair = w2 + w2.T                            # adds the G* transition weights
    factor = np.outer(dz, dz) * (lam[None, :] - lam[:, None])   # (j, k) entries
    rhs = float(np.sum(factor[np.ix_(in_j, ~in_j)] * pair.T[np.ix_(in_j, ~in_j)]))
    return float(lhs), rhs


def unitary_form_values(model: HermitianMatrixModel, indices, z: float) -> tuple[float, float]:
    """The two unitary rewrites of the sum-rule lhs, via H_U = U*HU - H.

    The first uses expectations of H_U + H_U* and the norms ||H_U phi_j||;
    the second uses ||(z-H) phi_j||^2 against 2z - UHU* - U*HU and the norms
    ||(z - UHU*) phi_j||.  Both must agree with the second-commutator form.
    """
    if model.g_kind != "unitary":
        raise ValueError("unitary rewrites require g_kind='unitary'")
    lam, vec = model.eig
    in_j = np.zeros(model.dim, dtype=bool)
    in_j[np.asarray(list(indices), dtype=int)] = True
    u = model.g
    uh = u.conj().T
    hu = uh @ model.h @ u - model.h
    hus = u @ model.h @ uh - model.h
    dz = z - lam

    diag_sum = np.real(np.diagonal(vec.conj().T @ (hu + hus) @ vec))
    n1 = np.sum(np.abs(hu @ vec) ** 2, axis=0)
    n2 = np.sum(np.abs(hus @ vec) ** 2, axis=0)
    lhs_a = float(np.sum(dz[in_j] ** 2 * diag_sum[in_j]) - np.sum(dz[in_j] * (n1[in_j] + n2[in_j])))

    eye = np.eye(model.dim)
    bracket = 2 * z * eye - u @ model.h @ uh - uh @ model.h @ u
    diag_b = np.real(np.diagonal(vec.conj().T @ bracket @ vec))
    a4 = np.sum(np.abs((z * eye - u @ model.h @ uh) @ vec) ** 2, axis=0)
    b4 = np.sum(np.abs((z * eye - uh @ model.h @ u) @ vec) ** 2, axis=0)
    lhs_b = float(np.sum(dz[in_j] ** 2 * diag_b[in_j]) - np.sum(dz[in_j] * (a4[in_j] + b4[in_j])))
    return lhs_a, lhs_b


def discrete_sum_rule_residual(model: HermitianMatrixModel, indices, z: float,
                               tolerance: float | None = None) -> IdentityResidualReport:
    """Sum-rule identity over an index set J, cross-checked against the
    unitary rewrites when G is unitary.

    The reported residual is the worst disagreement among: lhs vs rhs of the
    second-commutator form, and (for unitary G) both rewrites vs that lhs.
    """
    tolerance = default_tolerance(model) if tolerance is None else tolerance
    lhs, rhs = eigenbasis_sum_rule_sides(model, indices, z)
    worst = abs(lhs - rhs)
    if model.g_kind == "unitary":
        lhs_a, lhs_b = unitary_form_values(model, indices, z)
        worst = max(worst, abs(lhs_a - lhs), abs(lhs_b - lhs_a))
    scale = max(1.0, abs(lhs), abs(rhs))
    rel = worst / scale
    return IdentityResidualReport(lhs=lhs, rhs=rhs, residual=lhs - rhs,
                                  relative_residual=rel, tolerance=tolerance,
                                  passed=rel <= tolerance)


def second_commutator_identity_residual(model: HermitianMatrixModel,
                                        tolerance: float = 1e-12) -> IdentityResidualReport:
    """Matrix identity G*[H,G] + G[H,G*] = ([G*,[H,G]] + [G,[H,G*]])/2 + [H, GG* + G*G]/2.

    lhs and rhs are reported as Frobenius norms; the residual is the Frobenius
    norm of the difference, relative to max(1, scale).
    """
    ch, chs = _first_commutators(model)
    left = _k_matrix(model, ch, chs)
    right = 0.5 * (commutator(model.g.conj().T, ch) + commutator(model.g, chs)) \
        + 0.5 * commutator(model.h, model.g @ model.g.conj().T + model.g.conj().T @ model.g)
    diff = np.linalg.norm(left - right)
    ln, rn = np.linalg.norm(left), np.linalg.norm(right)
    rel = diff / max(1.0, ln, rn)
    return IdentityResidualReport(lhs=float(ln), rhs=float(rn), residual=float(diff),
                                  relative_residual=float(rel), tolerance=tolerance,
                                  passed=rel <= tolerance)


# ---------------------------------------------------------------------------
# gap inequalities
# ---------------------------------------------------------------------------

def gap_slack(model: HermitianMatrixModel, projector: ProjectorSpec,
              lambda_cap: float, lambda_floor: float, z: float,
              tolerance: float | None = None) -> IdentityResidualReport:
    """One-sided gap inequality for a projector separating the spectrum.

    Requires max spec(HP) <= lambda_cap < lambda_floor <= min spec(H(1-P))
    and z in [lambda_cap, lambda_floor]; the shifted-trace lhs must then stay
    below tr((G*[H,G] + G[H,G*]) P) (z - lambda_cap)(z - lambda_floor).
    """
    tolerance = default_tolerance(model) if tolerance is None else tolerance
    lam, _ = model.eig
    idx = projector.resolve(lam)
    if idx.size == 0 or idx.size == model.dim:
        raise ValueError("gap projector must be proper (neither empty nor full)")
    comp = np.setdiff1d(np.arange(model.dim), idx)
    slop = 1e-12 * max(1.0, float(np.max(np.abs(lam))))
    top_low = float(np.max(lam[idx])) - slop
    bot_high = float(np.min(lam[comp])) + slop
    if not (top_low <= lambda_cap < lambda_floor <= bot_high):
        raise ValueError(
            f"gap condition violated: spec(HP) reaches {top_low}, spec(H(1-P)) "
            f"starts at {bot_high}, caps ({lambda_cap}, {lambda_floor})")
    if not (lambda_cap <= z <= lambda_floor):
        raise ValueError(f"z={z} outside [{lambda_cap}, {lambda_floor}]")
    p_matrix = _projector_matrix(model, idx)
    lhs, _ = _shifted_sides(model, p_matrix, z)
    ch, chs = _first_commutators(model)
    kp = np.trace(_k_matrix(model, ch, chs) @ p_matrix)
    rhs = complex(kp) * (z - lambda_cap) * (z - lambda_floor)
    return inequality_report(lhs, rhs, tolerance)


def _t_power_representation_residual(s_values: np.ndarray, sigma: float) -> float:
    """Relative error of f(s) = s^sigma against 1/2 int_0^s (s-t)^2 f'''(t) dt.

    The substitution t = u^2 removes the endpoint singularity of t^(sigma-3),
    making the integrand polynomial for half-integer sigma.
    """
    nodes, weights = np.polynomial.legendre.leggauss(64)
    c = sigma * (sigma - 1.0) * (sigma - 2.0)
    worst = 0.0
    for s in np.atleast_1d(s_values):
        if s <= 0:
            continue
        root = np.sqrt(s)
        u = root * (nodes + 1.0) / 2.0
        integrand = (s - u ** 2) ** 2 * c * u ** (2.0 * sigma - 5.0)
        integral = 0.5 * (root / 2.0) * np.sum(weights * 2.0 * integrand)
        worst = max(worst, abs(integral - s ** sigma) / max(1.0, s ** sigma))
    return worst


def f_gap_slack(model: HermitianMatrixModel, z: float, sigma: float,
                tolerance: float | None = None) -> IdentityResidualReport:
    """Smooth-function gap inequality for f(t) = t^sigma, sigma >= 3.

    With P the spectral projector below z (z must stay 1e-9 clear of the
    spectrum), the trace
        tr(f((z-H)_+) (G*[H,G] + G[H,G*])) + tr(f'((z-H)_+) M) / 2
    must be <= 0; the report's slack is its negative.  The moment
    representation of f against (.)_+^2 is re-verified by quadrature on the
    active eigenvalue shifts and a failure there raises rather than passes.
    """
    if sigma < 3:
        raise ValueError(f"sigma must be >= 3 so f''' stays integrable in the "
                         f"required form, got {sigma}")
    tolerance = default_tolerance(model) if tolerance is None else tolerance
    lam, vec = model.eig
    idx = ProjectorSpec.below(z).resolve(lam)
    shifts = z - lam
    below = np.zeros(model.dim, dtype=bool)
    below[idx] = True
    fvals = np.where(below, np.maximum(shifts, 0.0) ** sigma, 0.0)
    fpvals = np.where(below, sigma * np.maximum(shifts, 0.0) ** (sigma - 1.0), 0.0)
    fmat = (vec * fvals) @ vec.conj().T
    fpmat = (vec * fpvals) @ vec.conj().T
    ch, chs = _first_commutators(model)
    kmat = _k_matrix(model, ch, chs)
    mmat = _m_matrix(ch, chs)
    lhs = np.trace(fmat @ kmat) + 0.5 * np.trace(fpmat @ mmat)
    rep = _t_power_representation_residual(shifts[below], sigma)
    if rep > 1e-6:
        raise RuntimeError(f"moment representation of t^{sigma} failed quadrature "
                           f"check: relative error {rep:.3e}")
    return inequality_report(lhs, 0.0, tolerance)
