"""Closed-form Laplace-Beltrami spectra of round spheres.

S^d of radius r, immersed in R^(d+1), has eigenvalues l (l + d - 1) / r^2
with the spherical-harmonic multiplicities, and constant mean curvature
h = d / r.  That makes it the one family of closed hypersurfaces where the
geometric trace inequality, the monotone ratio with shift h^2/4, and the
Reilly-type bounds can all be tested against exact data.
"""

import math
from dataclasses import dataclass

import numpy as np

from .bounds import reilly_bound
from .reports import BoundReport, bound_report
from .riesz import gamma_exact


@dataclass(frozen=True)
class SphereSpec:
    d: int
    radius: float = 1.0
    levels: int = 30

    def __post_init__(self):
        if self.d < 1:
            raise ValueError(f"dimension must be >= 1, got {self.d}")
        if self.radius <= 0:
            raise ValueError(f"radius must be positive, got {self.radius}")
        if self.levels < 1:
            raise ValueError(f"levels must be >= 1, got {self.levels}")

    @property
    def h(self) -> float:
        """Mean curvature magnitude (sum of principal curvatures)."""
        return self.d / self.radius

    def level_eigenvalue(self, level: int) -> float:
        return level * (level + self.d - 1) / self.radius ** 2

    @property
    def volume(self) -> float:
        return sphere_volume(self.d, self.radius)


def level_multiplicity(level: int, d: int) -> int:
    """Dimension of the level-l spherical harmonics on S^d."""
    if level < 0:
        raise ValueError(f"level must be >= 0, got {level}")
    upper = math.comb(level + d, d)
    lower = math.comb(level + d - 2, d) if level + d - 2 >= 0 else 0
    return upper - lower


def sphere_volume(d: int, radius: float = 1.0) -> float:
    """Surface measure of S^d_r: 2 pi^((d+1)/2) / Gamma((d+1)/2) * r^d."""
    frac, s = gamma_exact(d + 1)
    gamma_val = float(frac) * math.pi ** (s / 2.0)
    return 2.0 * math.pi ** ((d + 1) / 2.0) / gamma_val * radius ** d


def sphere_eigenvalues(spec: SphereSpec) -> np.ndarray:
    """Flattened ascending spectrum through the requested level."""
    return np.repeat([spec.level_eigenvalue(l) for l in range(spec.levels + 1)],
                     [level_multiplicity(l, spec.d) for l in range(spec.levels + 1)])


def geom_inequality_slack(spec: SphereSpec, n: int, z: float,
                          tolerance: float = 1e-10) -> BoundReport:
    """Geometric trace bound R_2(z) <= (4/d) sum_{j<=n} (z - l_j)(l_j + h^2/4).

    Asserted for z up to lambda_{n+1}; sharp (slack 0) at the top of the
    first gap on every round sphere.
    """
    lam = sphere_eigenvalues(spec)
    if not 1 <= n < len(lam):
        raise ValueError(f"n must be in 1..{len(lam) - 1}")
    if z > lam[n] + 1e-12:
        raise ValueError(f"z={z} exceeds lambda_(n+1)={lam[n]}; the bound is "
                         "only asserted below the gap top")
    head = lam[:n]
    curvature = spec.h ** 2 / 4.0
    cap = 4.0 / spec.d * float(np.sum((z - head) * (head + curvature)))
    r2 = float(np.sum(np.maximum(z - lam, 0.0) ** 2))
    return bound_report("geometric-trace", bound=cap, actual=r2,
                        tolerance=tolerance,
                        inputs={"n": n, "z": z, "d": spec.d, "r": spec.radius})


@dataclass(frozen=True)
class ReillyRecord:
    n: int
    lam_next: float
    sharp: BoundReport
    weak: BoundReport


def reilly_sphere_check(spec: SphereSpec, n_max: int,
                        tolerance: float = 1e-12) -> list[ReillyRecord]:
    """Reilly-type bound and its classic weakening against the exact spectrum.

    For each n <= n_max: lambda_{n+1} <= reilly_bound(n, d, h) and
    lambda_{n+1} <= (1 + 4/d) mean(lambda_1..lambda_n) + h^2/d (which at
    n = 1 is the classic Reilly inequality, sharp on round spheres).
    """
    lam = sphere_eigenvalues(spec)
    if len(lam) <= n_max:
        raise ValueError(f"need the spectrum through index {n_max + 1}; "
                         f"raise levels beyond {spec.levels}")
    records = []
    tau = spec.h ** 2 / spec.d
    for n in range(1, n_max + 1):
        actual = float(lam[n])
        sharp = reilly_bound(n, spec.d, spec.h, actual=actual, tolerance=tolerance)
        weak_value = (1.0 + 4.0 / spec.d) * float(np.mean(lam[:n])) + tau
        weak = bound_report("reilly-classic-weak", bound=weak_value, actual=actual,
                            tolerance=tolerance, inputs={"n": n, "d": spec.d})
        records.append(ReillyRecord(n=n, lam_next=actual, sharp=sharp, weak=weak))
    return records


def weyl_counting_ratio(spec: SphereSpec) -> float:
    """N(lambda) / (L^cl_{0,d} Vol lambda^{d/2}) just above the top level."""
    from .riesz import lieb_thirring_constant
    lam_top = spec.level_eigenvalue(spec.levels)
    count = sum(level_multiplicity(l, spec.d) for l in range(spec.levels + 1))
    return count / (lieb_thirring_constant(0.0, spec.d) * spec.volume
                    * lam_top ** (spec.d / 2.0))
