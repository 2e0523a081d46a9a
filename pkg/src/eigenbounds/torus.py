"""Plane-wave discretization of -alpha*Laplacian + V on rectangular tori.

The torus with side lengths L_1..L_d carries the Fourier basis
e_n(x) = exp(i (q.n + k) . x) / sqrt(Vol), with dual basis q_l = 2 pi / L_l
and quasimomentum k in the fundamental Brillouin cell.  In that basis the
Hamiltonian is the dense Hermitian matrix

    H[n, m] = alpha |q.n + k|^2 delta_{nm} + V^hat(n - m),

truncated to a symmetric integer box |n_l| <= N_l (the box, rather than an
energy ball, keeps the mode set closed under negation and makes the lattice
shift structure of multiplication by exp(-i q.x) transparent).
"""

import itertools
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Mapping

import numpy as np

from .reports import IdentityResidualReport

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class TorusGeometry:
    """Rectangular torus of side lengths L_l; dual basis q_l = 2 pi / L_l."""

    lengths: tuple[float, ...]

    def __post_init__(self):
        lengths = tuple(float(x) for x in np.atleast_1d(self.lengths))
        if not 1 <= len(lengths) <= 3:
            raise ValueError(f"dimension must be 1, 2 or 3, got {len(lengths)}")
        if any(x <= 0 for x in lengths):
            raise ValueError(f"side lengths must be positive, got {lengths}")
        object.__setattr__(self, "lengths", lengths)

    @property
    def d(self) -> int:
        return len(self.lengths)

    @property
    def dual_basis(self) -> np.ndarray:
        return TWO_PI / np.asarray(self.lengths)

    @property
    def g(self) -> float:
        """Mean squared dual-basis length, (1/d) sum q_l^2."""
        return float(np.mean(self.dual_basis ** 2))

    @property
    def volume(self) -> float:
        return float(np.prod(self.lengths))

    def in_brillouin_cell(self, k: np.ndarray) -> bool:
        q = self.dual_basis
        return bool(np.all(k >= -q / 2) and np.all(k < q / 2))


class PotentialSpec:
    """Finite trigonometric polynomial V(x) = sum_m V^hat(m) exp(i (q.m).x).

    Coefficients are keyed by integer dual-lattice vectors and must satisfy
    V^hat(-m) = conj(V^hat(m)) so that V is real valued.
    """

    def __init__(self, d: int, coefficients: Mapping[tuple, complex], tol: float = 1e-12):
        self.d = int(d)
        coeffs: dict[tuple[int, ...], complex] = {}
        for key, amp in coefficients.items():
            key = tuple(int(v) for v in np.atleast_1d(key))
            if len(key) != self.d:
                raise ValueError(f"coefficient index {key} does not match d={self.d}")
            coeffs[key] = coeffs.get(key, 0.0) + complex(amp)
        for key, amp in coeffs.items():
            neg = tuple(-v for v in key)
            if abs(coeffs.get(neg, 0.0) - amp.conjugate()) > tol * max(1.0, abs(amp)):
                raise ValueError(
                    f"potential is not real: coefficient at {neg} must be the "
                    f"conjugate of the one at {key}")
        self.coefficients = {k: v for k, v in coeffs.items() if v != 0}

    @classmethod
    def zero(cls, d: int) -> "PotentialSpec":
        return cls(d, {})

    @classmethod
    def constant(cls, d: int, value: float) -> "PotentialSpec":
        return cls(d, {(0,) * d: complex(value)})

    @classmethod
    def cosine(cls, harmonic, amplitude: float = 1.0) -> "PotentialSpec":
        """V(x) = amplitude * cos((q.m).x) for the integer vector m."""
        m = tuple(int(v) for v in np.atleast_1d(harmonic))
        neg = tuple(-v for v in m)
        return cls(len(m), {m: amplitude / 2.0, neg: amplitude / 2.0})

    @property
    def max_harmonic(self) -> tuple[int, ...]:
        if not self.coefficients:
            return (0,) * self.d
        return tuple(int(max(abs(k[ax]) for k in self.coefficients))
                     for ax in range(self.d))

    def coefficient_sum_bound(self) -> float:
        """sum |V^hat(m)|, an upper bound on sup |V|."""
        return float(sum(abs(v) for v in self.coefficients.values()))

    def _grid_values(self, samples_per_axis: int) -> np.ndarray:
        axes = [np.arange(samples_per_axis) / samples_per_axis for _ in range(self.d)]
        mesh = np.meshgrid(*axes, indexing="ij")
        out = np.zeros(mesh[0].shape, dtype=complex)
        for m, amp in self.coefficients.items():
            phase = sum(mi * ax for mi, ax in zip(m, mesh))
            out += amp * np.exp(2j * np.pi * phase)
        return out.real

    def _dense_samples(self) -> int:
        return max(64, 8 * max(self.max_harmonic, default=0))

    @property
    def sup_value(self) -> float:
        """max V over a dense fractional grid (>= 4x the highest harmonic)."""
        if not self.coefficients:
            return 0.0
        return float(np.max(self._grid_values(self._dense_samples())))

    @property
    def inf_value(self) -> float:
        if not self.coefficients:
            return 0.0
        return float(np.min(self._grid_values(self._dense_samples())))

    @property
    def sup_abs(self) -> float:
        return max(abs(self.sup_value), abs(self.inf_value))


@dataclass(frozen=True, eq=False)
class PlaneWaveBasis:
    """Symmetric integer box |n_l| <= N_l, modes in lexicographic order."""

    n_max: tuple[int, ...]
    modes: np.ndarray = field(repr=False, default=None)

    def __post_init__(self):
        n_max = tuple(int(v) for v in np.atleast_1d(self.n_max))
        if any(v < 1 for v in n_max):
            raise ValueError(f"box half-widths must be >= 1, got {n_max}")
        modes = np.array(list(itertools.product(
            *[range(-nm, nm + 1) for nm in n_max])), dtype=int)
        object.__setattr__(self, "n_max", n_max)
        object.__setattr__(self, "modes", modes)

    @classmethod
    def box(cls, n_max) -> "PlaneWaveBasis":
        return cls(n_max=tuple(int(v) for v in np.atleast_1d(n_max)))

    @classmethod
    def for_cutoff(cls, geometry: TorusGeometry, alpha: float, k, cutoff: float) -> "PlaneWaveBasis":
        """Smallest box containing every mode with alpha |q.n + k|^2 <= cutoff."""
        if cutoff <= 0 or alpha <= 0:
            raise ValueError("cutoff and alpha must be positive")
        k = _as_k(geometry, k)
        q = geometry.dual_basis
        reach = (np.sqrt(cutoff / alpha) + np.abs(k)) / q
        return cls.box(np.maximum(1, np.floor(reach).astype(int)))

    @property
    def d(self) -> int:
        return len(self.n_max)

    @property
    def size(self) -> int:
        return len(self.modes)

    def index_of(self, points: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Lexicographic index of each integer point; valid marks in-box points."""
        pts = np.atleast_2d(np.asarray(points, dtype=int))
        nm = np.asarray(self.n_max)
        valid = np.all(np.abs(pts) <= nm, axis=1)
        shifted = pts + nm
        dims = 2 * nm + 1
        strides = np.append(np.cumprod(dims[::-1])[::-1][1:], 1)
        idx = shifted @ strides
        idx[~valid] = -1
        return idx, valid


def _as_k(geometry: TorusGeometry, k) -> np.ndarray:
    if k is None:
        return np.zeros(geometry.d)
    k = np.atleast_1d(np.asarray(k, dtype=float))
    if k.shape != (geometry.d,):
        raise ValueError(f"quasimomentum must have {geometry.d} components, got {k.shape}")
    return k


def kinetic_diagonal(geometry: TorusGeometry, basis: PlaneWaveBasis, k) -> np.ndarray:
    """|q.n + k|^2 for every mode (multiply by alpha for the energy)."""
    k = _as_k(geometry, k)
    kappa = basis.modes * geometry.dual_basis + k
    return np.sum(kappa ** 2, axis=1)


def assemble_hamiltonian(geometry: TorusGeometry, potential: PotentialSpec,
                         alpha: float, k, basis: PlaneWaveBasis) -> np.ndarray:
    """Dense plane-wave matrix of -alpha*Laplacian + V at quasimomentum k."""
    if alpha <= 0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    if potential.d != geometry.d:
        raise ValueError(f"potential dimension {potential.d} != geometry {geometry.d}")
    k = _as_k(geometry, k)
    if not geometry.in_brillouin_cell(k):
        raise ValueError(f"k={k} outside the fundamental Brillouin cell")
    for m in potential.coefficients:
        if any(abs(mi) > 2 * nm for mi, nm in zip(m, basis.n_max)):
            raise ValueError(
                f"potential harmonic {m} cannot couple any mode pair in box "
                f"{basis.n_max}; enlarge the basis")
    size = basis.size
    h = np.zeros((size, size), dtype=complex)
    h[np.diag_indices(size)] = alpha * kinetic_diagonal(geometry, basis, k)
    cols = np.arange(size)
    for m, amp in potential.coefficients.items():
        rows, valid = basis.index_of(basis.modes + np.asarray(m, dtype=int))
        h[rows[valid], cols[valid]] += amp
    return h


@dataclass(frozen=True, eq=False)
class SpectrumResult:
    """Ascending eigenvalues with plane-wave eigenvector coefficients."""

    eigenvalues: np.ndarray
    vectors: np.ndarray
    alpha: float
    k: np.ndarray
    geometry: TorusGeometry
    basis: PlaneWaveBasis
    potential: PotentialSpec | None = None

    @property
    def size(self) -> int:
        return len(self.eigenvalues)

    @cached_property
    def kinetic_values(self) -> np.ndarray:
        """|q.n + k|^2 on the basis modes (alpha not applied)."""
        return kinetic_diagonal(self.geometry, self.basis, self.k)

    @property
    def kinetic_cutoff(self) -> float:
        return float(self.alpha * np.max(self.kinetic_values))

    def reconstruct_hamiltonian(self) -> np.ndarray:
        return (self.vectors * self.eigenvalues) @ self.vectors.conj().T

    def kinetic_energies(self) -> np.ndarray:
        """T_j = ||grad phi_j||^2 for every eigenvector, via the coefficients."""
        return np.real(np.sum(np.abs(self.vectors) ** 2
                              * self.kinetic_values[:, None], axis=0))

    def dominant_modes(self) -> np.ndarray:
        """Integer mode with the largest coefficient weight, per eigenvector."""
        return self.basis.modes[np.argmax(np.abs(self.vectors), axis=0)]


def solve_spectrum(matrix: np.ndarray, geometry: TorusGeometry, basis: PlaneWaveBasis,
                   alpha: float, k=None, potential: PotentialSpec | None = None,
                   validate: bool = True) -> SpectrumResult:
    """Dense Hermitian eigendecomposition with orthonormality and residual checks."""
    k = _as_k(geometry, k)
    try:
        lam, vec = np.linalg.eigh(matrix)
    except np.linalg.LinAlgError as exc:
        scale = float(np.linalg.norm(matrix))
        raise RuntimeError(f"eigendecomposition failed (matrix norm {scale:.3e}, "
                           f"size {matrix.shape[0]})") from exc
    result = SpectrumResult(eigenvalues=lam, vectors=vec, alpha=alpha, k=k,
                            geometry=geometry, basis=basis, potential=potential)
    if validate:
        ortho = np.linalg.norm(vec.conj().T @ vec - np.eye(len(lam)))
        if ortho > 1e-10 * len(lam):
            raise RuntimeError(f"eigenvectors not orthonormal: defect {ortho:.3e}")
        resid = np.linalg.norm(matrix @ vec - vec * lam, axis=0)
        allowed = 1e-8 * (np.abs(lam) + max(result.kinetic_cutoff, 1.0))
        if np.any(resid > allowed):
            j = int(np.argmax(resid - allowed))
            raise RuntimeError(f"eigenpair residual {resid[j]:.3e} at index {j} "
                               f"exceeds {allowed[j]:.3e}")
    return result


def torus_spectrum(geometry: TorusGeometry, potential: PotentialSpec,
                   alpha: float = 1.0, k=None, n_max=None,
                   cutoff: float | None = None) -> SpectrumResult:
    """Assemble and diagonalize in one step; pick the box from n_max or cutoff."""
    if n_max is not None:
        basis = PlaneWaveBasis.box(n_max if np.ndim(n_max) else (int(n_max),) * geometry.d)
    elif cutoff is not None:
        basis = PlaneWaveBasis.for_cutoff(geometry, alpha, k, cutoff)
    else:
        defaults = {1: 20, 2: 12, 3: 6}
        basis = PlaneWaveBasis.box((defaults[geometry.d],) * geometry.d)
    h = assemble_hamiltonian(geometry, potential, alpha, k, basis)
    return solve_spectrum(h, geometry, basis, alpha, k, potential)


def apply_potential(potential: PotentialSpec, basis: PlaneWaveBasis,
                    x: np.ndarray) -> np.ndarray:
    """(V x)_n = sum_m V^hat(m) x_{n-m} on the truncated mode set."""
    out = np.zeros_like(x, dtype=complex)
    for m, amp in potential.coefficients.items():
        src, valid = basis.index_of(basis.modes - np.asarray(m, dtype=int))
        out[valid] += amp * x[src[valid]]
    return out


@dataclass(frozen=True)
class KineticTerms:
    """Kinetic and potential expectations of one eigenvector.

    ``identity_residual`` is |lambda_j - (alpha T_j + V_j)|; ``fh_residual``
    compares T_j with the centered finite difference of lambda_j in alpha
    (None when an eigenvalue crossing makes the difference meaningless).
    """

    t: float
    v: float
    identity_residual: float
    fh_residual: float | None
    crossing: bool
    clustered: bool


def kinetic_terms(spec: SpectrumResult, potential: PotentialSpec, j: int,
                  delta_rel: float = 1e-4, cluster_tol: float = 1e-8) -> KineticTerms:
    """T_j, V_j, and the Feynman-Hellmann residual d(lambda_j)/d(alpha) vs T_j."""
    if not 0 <= j < spec.size:
        raise ValueError(f"index {j} outside computed spectrum of size {spec.size}")
    c = spec.vectors[:, j]
    t = float(np.sum(np.abs(c) ** 2 * spec.kinetic_values))
    v = float(np.real(np.vdot(c, apply_potential(potential, spec.basis, c))))
    lam = spec.eigenvalues
    identity_residual = abs(lam[j] - (spec.alpha * t + v))

    scale = max(1.0, float(np.max(np.abs(lam))))
    clustered = _near_neighbors(lam, j, cluster_tol * scale)

    delta = delta_rel * spec.alpha
    kin1 = spec.kinetic_values
    base = spec.reconstruct_hamiltonian()
    lam_plus = np.linalg.eigvalsh(base + delta * np.diag(kin1))
    lam_minus = np.linalg.eigvalsh(base - delta * np.diag(kin1))
    crossing = clustered or _near_neighbors(lam_plus, j, cluster_tol * scale) \
        or _near_neighbors(lam_minus, j, cluster_tol * scale)
    fh = None
    if not crossing:
        fh = abs(t - (lam_plus[j] - lam_minus[j]) / (2.0 * delta))
    return KineticTerms(t=t, v=v, identity_residual=identity_residual,
                        fh_residual=fh, crossing=crossing, clustered=clustered)


def _near_neighbors(lam: np.ndarray, j: int, tol: float) -> bool:
    left = j > 0 and abs(lam[j] - lam[j - 1]) < tol
    right = j + 1 < len(lam) and abs(lam[j + 1] - lam[j]) < tol
    return left or right


def shift_matrix(basis: PlaneWaveBasis, m0) -> np.ndarray:
    """Matrix of multiplication by exp(-i (q.m0).x): mode n -> n - m0, clipped."""
    m0 = np.asarray(m0, dtype=int)
    size = basis.size
    s = np.zeros((size, size))
    dest, valid = basis.index_of(basis.modes - m0)
    s[dest[valid], np.where(valid)[0]] = 1.0
    return s


def commutator_representation_check(spec: SpectrumResult, m0,
                                    tolerance: float = 1e-10) -> IdentityResidualReport:
    """Check the closed forms of [H, G] and [G*, [H, G]] for G = exp(-i q.x).

    On modes far enough from the truncation box (the shift by m0 plus the
    potential's harmonic reach stays inside), [H, G] must act as the shift
    composed with multiplication by alpha (|q|^2 - 2 q.(q.n + k)), and the
    second commutator as the constant 2 alpha |q|^2.
    """
    m0 = np.asarray(np.atleast_1d(m0), dtype=int)
    if m0.shape != (spec.geometry.d,) or not m0.any():
        raise ValueError(f"m0 must be a nonzero integer vector of length {spec.geometry.d}")
    qvec = m0 * spec.geometry.dual_basis
    q2 = float(np.sum(qvec ** 2))
    h = spec.reconstruct_hamiltonian()
    s = shift_matrix(spec.basis, m0)
    ch = h @ s - s @ h

    harm = np.asarray(spec.potential.max_harmonic) if spec.potential else np.zeros(spec.geometry.d, int)
    n_max = np.asarray(spec.basis.n_max)
    margin1 = np.abs(m0) + harm
    margin2 = 2 * np.abs(m0) + harm
    inner1 = np.all(np.abs(spec.basis.modes) <= n_max - margin1, axis=1)
    inner2 = np.all(np.abs(spec.basis.modes) <= n_max - margin2, axis=1)
    if not inner1.any() or not inner2.any():
        raise ValueError("no interior modes at this cutoff; enlarge the basis")

    kappa = spec.basis.modes * spec.geometry.dual_basis + spec.k
    mult = spec.alpha * (q2 - 2.0 * kappa @ qvec)
    expected = s * mult[None, :]
    cols = np.where(inner1)[0]
    resid1 = np.linalg.norm(ch[:, cols] - expected[:, cols])
    scale1 = max(1.0, np.linalg.norm(expected[:, cols]))

    second = s.T @ ch - ch @ s.T
    cols2 = np.where(inner2)[0]
    expected2 = np.zeros((spec.basis.size, len(cols2)), dtype=complex)
    expected2[cols2, np.arange(len(cols2))] = 2.0 * spec.alpha * q2
    resid2 = np.linalg.norm(second[:, cols2] - expected2)
    scale2 = max(1.0, np.linalg.norm(expected2))

    rel = max(resid1 / scale1, resid2 / scale2)
    return IdentityResidualReport(lhs=float(np.linalg.norm(ch[:, cols])),
                                  rhs=float(np.linalg.norm(expected[:, cols])),
                                  residual=float(resid1),
                                  relative_residual=float(rel),
                                  tolerance=tolerance, passed=rel <= tolerance)
