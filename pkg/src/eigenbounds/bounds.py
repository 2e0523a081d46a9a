"""Closed-form universal eigenvalue bounds from the trace identities.

Everything here consumes only spectral data (a prefix of the ascending
spectrum, the geometry constant g, the monotone shift tau, and optional
potential means) and evaluates the quadratic polynomial bound, the resulting
bound on the next eigenvalue, the ratio bounds on eigenvalue means through
the optimal zero z0_n, the kinetic difference inequality, and the Reilly-type
curvature bound.

Two different discriminants appear and are kept under distinct names:
``frak_discriminant`` belongs to the potential-weighted quadratic (it feeds
the next-eigenvalue bound), while ``shifted_discriminant_and_z0`` belongs to
the tau-shifted, potential-free quadratic (it feeds the ratio and Legendre
bounds).  A negative value of either signals corrupted inputs and raises
instead of clamping.
"""

from dataclasses import dataclass

import numpy as np

from .reports import BoundReport, bound_report
from .torus import SpectrumResult, apply_potential, PotentialSpec

QUAD_VARIANTS = ("weighted", "shifted", "gap")


@dataclass(frozen=True)
class SpectrumPrefix:
    """The first n eigenvalues with the scalars the bounds consume.

    ``v_mean`` and ``lambda_v_mean`` are the averages of V_j and of
    lambda_j V_j over the prefix; they are required by the potential-weighted
    quadratic and may be None for free spectra.
    """

    eigenvalues: tuple[float, ...]
    d: int
    g: float = 0.0
    tau: float = 0.0
    lambda_next: float | None = None
    v_mean: float | None = None
    lambda_v_mean: float | None = None

    def __post_init__(self):
        lam = tuple(float(x) for x in self.eigenvalues)
        if not lam:
            raise ValueError("prefix needs at least one eigenvalue")
        if any(b < a - 1e-12 for a, b in zip(lam, lam[1:])):
            raise ValueError("eigenvalues must be ascending")
        if self.lambda_next is not None and self.lambda_next < lam[-1] - 1e-12:
            raise ValueError("lambda_next must not be below the prefix top")
        object.__setattr__(self, "eigenvalues", lam)

    @property
    def n(self) -> int:
        return len(self.eigenvalues)

    @property
    def mean(self) -> float:
        return float(np.mean(self.eigenvalues))

    @property
    def mean_sq(self) -> float:
        return float(np.mean(np.square(self.eigenvalues)))

    @classmethod
    def from_torus(cls, spec: SpectrumResult, pot: PotentialSpec, n: int,
                   tau: float | None = None) -> "SpectrumPrefix":
        """Prefix with potential means V_j = <phi_j, V phi_j> attached."""
        if not 1 <= n < spec.size:
            raise ValueError(f"n must be in 1..{spec.size - 1}")
        lam = spec.eigenvalues
        v = np.array([np.real(np.vdot(spec.vectors[:, j],
                                      apply_potential(pot, spec.basis, spec.vectors[:, j])))
                      for j in range(n)])
        geom = spec.geometry
        if tau is None:
            tau = geom.g * geom.d / 4.0 - pot.sup_value
        return cls(eigenvalues=tuple(lam[:n]), d=geom.d, g=geom.g, tau=tau,
                   lambda_next=float(lam[n]), v_mean=float(np.mean(v)),
                   lambda_v_mean=float(np.mean(lam[:n] * v)))


def quadratic_coefficients(prefix: SpectrumPrefix) -> tuple[float, float]:
    """(b, c) of the monic potential-weighted quadratic z^2 - b z + c."""
    if prefix.v_mean is None or prefix.lambda_v_mean is None:
        raise ValueError("potential means are required for the weighted quadratic")
    d = prefix.d
    b = (2.0 + 4.0 / d) * prefix.mean + prefix.g - (4.0 / d) * prefix.v_mean
    c = (1.0 + 4.0 / d) * prefix.mean_sq + prefix.g * prefix.mean \
        - (4.0 / d) * prefix.lambda_v_mean
    return b, c


def quad_poly_value(prefix: SpectrumPrefix, z: float, variant: str) -> float:
    """Value of one of the three quadratic forms at z.

    weighted: the monic potential-weighted quadratic (<= 0 on the gap);
    shifted:  sum_j (zt - mu_j)(zt - (1+4/d) mu_j), tau-shifted, no geometry;
    gap:      sum_j (z - l_j)(z - (d+4)/d l_j - g), the free-Laplacian form.
    """
    d = prefix.d
    lam = np.asarray(prefix.eigenvalues)
    if variant == "weighted":
        b, c = quadratic_coefficients(prefix)
        return float(z * z - b * z + c)
    if variant == "shifted":
        mu = lam + prefix.tau
        zt = z + prefix.tau
        return float(np.sum((zt - mu) * (zt - (1.0 + 4.0 / d) * mu)))
    if variant == "gap":
        return float(np.sum((z - lam) * (z - (d + 4.0) / d * lam - prefix.g)))
    raise ValueError(f"variant must be one of {QUAD_VARIANTS}, got {variant!r}")


def gap_polynomial_check(prefix: SpectrumPrefix, z: float,
                         tolerance: float = 1e-10) -> BoundReport:
    """Free-Laplacian gap bound: the gap-variant value must stay below
    n (z - l_n)(z - l_{n+1}) for z in [l_n, l_{n+1}]."""
    if prefix.lambda_next is None:
        raise ValueError("gap check needs lambda_next")
    top = prefix.eigenvalues[-1]
    if not top <= z <= prefix.lambda_next:
        raise ValueError(f"z={z} outside [{top}, {prefix.lambda_next}]")
    value = quad_poly_value(prefix, z, "gap")
    cap = prefix.n * (z - top) * (z - prefix.lambda_next)
    return bound_report("gap-polynomial", bound=cap, actual=value,
                        tolerance=tolerance, inputs={"n": prefix.n, "z": z})


def frak_discriminant(prefix: SpectrumPrefix) -> float:
    """(b/2)^2 - c of the potential-weighted quadratic; must be >= 0."""
    b, c = quadratic_coefficients(prefix)
    disc = (b / 2.0) ** 2 - c
    scale = max(1.0, (b / 2.0) ** 2 + abs(c))
    if disc < -1e-12 * scale:
        raise RuntimeError(f"negative discriminant {disc:.3e}: inputs are not "
                           "a genuine spectral prefix")
    return max(disc, 0.0)


def lambda_next_bound(prefix: SpectrumPrefix,
                      tolerance: float = 1e-12) -> tuple[BoundReport, BoundReport]:
    """Upper bounds on the next eigenvalue: the larger root of the weighted
    quadratic, and its Cauchy-Schwarz weakening (mean_sq -> mean^2).

    For V = 0 the weak form reduces to (1 + 4/d) mean + g.
    """
    b, c = quadratic_coefficients(prefix)
    disc = frak_discriminant(prefix)
    strong = b / 2.0 + float(np.sqrt(disc))
    c_weak = (1.0 + 4.0 / prefix.d) * prefix.mean ** 2 + prefix.g * prefix.mean \
        - (4.0 / prefix.d) * (prefix.lambda_v_mean or 0.0)
    disc_weak = max((b / 2.0) ** 2 - c_weak, 0.0)
    weak = b / 2.0 + float(np.sqrt(disc_weak))
    inputs = {"n": prefix.n, "d": prefix.d, "g": prefix.g}
    return (bound_report("lambda-next", strong, prefix.lambda_next, tolerance, inputs),
            bound_report("lambda-next-weak", weak, prefix.lambda_next, tolerance, inputs))


def shifted_discriminant_and_z0(eigenvalues, d: int, tau: float = 0.0) -> tuple[float, float]:
    """D_n and the largest zero z0_n of the tau-shifted quadratic.

    D_n = (1 + 2/d)^2 (mean + tau)^2 - (1 + 4/d)(mean_sq + 2 mean tau + tau^2)
    z0_n = (d+2)/d (mean + tau) + sqrt(D_n), in the shifted variable.
    """
    lam = np.asarray(eigenvalues, dtype=float)
    mean = float(np.mean(lam))
    mean_sq = float(np.mean(lam ** 2))
    shifted_mean = mean + tau
    shifted_mean_sq = mean_sq + 2.0 * mean * tau + tau * tau
    disc = (1.0 + 2.0 / d) ** 2 * shifted_mean ** 2 - (1.0 + 4.0 / d) * shifted_mean_sq
    scale = max(1.0, shifted_mean ** 2 + shifted_mean_sq)
    if disc < -1e-12 * scale:
        raise RuntimeError(f"negative shifted discriminant {disc:.3e}: inputs are "
                           "not a genuine spectral prefix")
    disc = max(disc, 0.0)
    z0 = (d + 2.0) / d * shifted_mean + float(np.sqrt(disc))
    return disc, z0


@dataclass(frozen=True)
class RatioBounds:
    """z0_n bracket and the two ratio bounds on eigenvalue means."""

    d_n: float
    z0: float
    bracket: BoundReport
    mean_ratio: BoundReport       # sharp form via z0_n
    mean_ratio_weak: BoundReport  # (d+4)/(d+2) (k/n)^{2/d} form


def z0_and_ratio_bounds(eigenvalues, n: int, k: int, d: int, tau: float = 0.0,
                        tolerance: float = 1e-10) -> RatioBounds:
    """Ratio bounds (mean of first k vs mean of first n, tau-shifted).

    Checks z0_n <= (d+4)/d (mean_n + tau), then
    (d+2)/d (mean_k + tau) <= (k/n)^{2/d} z0_n, and the weaker
    (mean_k + tau)/(mean_n + tau) <= (d+4)/(d+2) (k/n)^{2/d}.
    """
    lam = np.sort(np.asarray(eigenvalues, dtype=float))
    if not 1 <= n <= k <= len(lam):
        raise ValueError(f"need 1 <= n <= k <= {len(lam)}, got n={n}, k={k}")
    d_n, z0 = shifted_discriminant_and_z0(lam[:n], d, tau)
    mean_n = float(np.mean(lam[:n])) + tau
    mean_k = float(np.mean(lam[:k])) + tau
    bracket = bound_report("z0-upper", (d + 4.0) / d * mean_n, z0, tolerance,
                           {"n": n, "d": d, "tau": tau})
    sharp = bound_report("mean-ratio", (k / n) ** (2.0 / d) * z0,
                         (d + 2.0) / d * mean_k, tolerance,
                         {"n": n, "k": k, "d": d, "tau": tau})
    weak = bound_report("mean-ratio-weak",
                        (d + 4.0) / (d + 2.0) * (k / n) ** (2.0 / d),
                        mean_k / mean_n, tolerance,
                        {"n": n, "k": k, "d": d, "tau": tau})
    return RatioBounds(d_n=d_n, z0=z0, bracket=bracket,
                       mean_ratio=sharp, mean_ratio_weak=weak)


def difference_inequality_slack(spec: SpectrumResult, z: float,
                                tolerance: float = 1e-8) -> BoundReport:
    """Kinetic difference bound R_2(z) <= alpha g R_1(z) + (4 alpha / d) sum (z-l_j) T_j.

    Asserted for z between the smallest and the largest computed eigenvalue
    (above that the truncated R_sigma are meaningless).
    """
    lam = spec.eigenvalues
    if z < lam[0] or z > lam[-1]:
        raise ValueError(f"z={z} outside the computed spectral range "
                         f"[{lam[0]}, {lam[-1]}]")
    t = spec.kinetic_energies()
    dz = np.maximum(z - lam, 0.0)
    r1 = float(np.sum(dz))
    r2 = float(np.sum(dz ** 2))
    geom = spec.geometry
    cap = spec.alpha * geom.g * r1 \
        + (4.0 * spec.alpha / geom.d) * float(np.sum(dz * t))
    return bound_report("difference-inequality", bound=cap, actual=r2,
                        tolerance=tolerance, inputs={"z": z, "g": geom.g})


def reilly_bound(n: int, d: int, h_inf: float,
                 actual: float | None = None,
                 tolerance: float = 1e-12) -> BoundReport:
    """Reilly-type bound on the (n+1)-th Laplace-Beltrami eigenvalue of a
    closed hypersurface with mean curvature bound h_inf:

        lambda_{n+1} <= ((d+4)^2 / (d (d+2)) n^{2/d} - 4/d) h_inf^2 / d.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if h_inf <= 0:
        raise ValueError(f"h_inf must be positive, got {h_inf}")
    value = ((d + 4.0) ** 2 / (d * (d + 2.0)) * n ** (2.0 / d) - 4.0 / d) \
        * h_inf ** 2 / d
    return bound_report("reilly", bound=value, actual=actual, tolerance=tolerance,
                        inputs={"n": n, "d": d, "h_inf": h_inf})
