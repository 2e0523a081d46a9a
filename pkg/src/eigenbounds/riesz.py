"""Riesz means, eigenvalue counting, the monotone ratio, and sharp constants.

For an ascending spectrum, R_sigma(z) = sum_j (z - lambda_j)_+^sigma, with
sigma = 0 the counting function.  The central monotonicity statement checked
here is that z -> R_2(z) / (z + tau)^(2 + d/2) is nondecreasing for the
geometric shift tau, and bounded by the semiclassical ceiling
L^cl_{2,d} Vol(M).  The classical constants

    L^cl_{sigma,d} = (4 pi)^(-d/2) Gamma(sigma + 1) / Gamma(sigma + d/2 + 1)

are computed by exact half-integer Gamma recursion (rational mantissa times a
power of pi), so sharpness tests never hinge on library gamma rounding.
"""

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .reports import BoundReport, bound_report


# ---------------------------------------------------------------------------
# Riesz means
# ---------------------------------------------------------------------------

def riesz_mean(eigenvalues, sigma: float, z: float) -> float:
    """R_sigma(z) = sum over eigenvalues below z of (z - lambda)^sigma.

    sigma = 0 counts eigenvalues strictly below z.
    """
    if sigma < 0:
        raise ValueError(f"sigma must be >= 0, got {sigma}")
    lam = np.asarray(eigenvalues, dtype=float)
    below = lam < z
    if sigma == 0:
        return float(np.count_nonzero(below))
    return float(np.sum((z - lam[below]) ** sigma))


def counting_function(eigenvalues, z: float) -> int:
    return int(riesz_mean(eigenvalues, 0.0, z))


@dataclass(frozen=True)
class MonotoneCurve:
    """Sampled ratio R_sigma(z) / (z + tau)^(sigma + d/2) with violation bookkeeping.

    ``violations`` lists grid indices i where the ratio drops from z_grid[i]
    to z_grid[i+1] by more than the tolerance (restricted to the z range where
    the spectrum is truncation-exact when ``z_valid_max`` was given).
    """

    z_grid: np.ndarray
    values: np.ndarray
    tau: float
    d: int
    sigma: float
    ceiling: float | None
    violations: tuple[int, ...]
    ceiling_ok: bool
    tolerance: float

    @property
    def monotone_ok(self) -> bool:
        return not self.violations


def monotone_ratio_curve(eigenvalues, tau: float, d: int, z_grid,
                         volume: float | None = None,
                         tolerance: float = 1e-10,
                         z_valid_max: float | None = None,
                         sigma: float = 2.0) -> MonotoneCurve:
    """Evaluate the monotone ratio on an ascending grid and flag decreases.

    The power (z + tau)^(sigma + d/2) requires z + tau > 0 everywhere on the
    grid.  When ``volume`` is given the semiclassical ceiling
    L^cl_{sigma,d} * volume is attached and checked; when ``z_valid_max`` is
    given, monotonicity and the ceiling are only asserted for
    z <= z_valid_max (truncated spectra are garbage above the retained range).
    sigma = 2 is the proven case; larger sigma is exposed for empirical
    smoke checks only.
    """
    grid = np.asarray(z_grid, dtype=float)
    if grid.ndim != 1 or len(grid) < 2 or np.any(np.diff(grid) <= 0):
        raise ValueError("z_grid must be strictly ascending with >= 2 points")
    if np.min(grid) + tau <= 0:
        raise ValueError(f"grid requires z + tau > 0; min z = {grid[0]}, tau = {tau}")
    if sigma < 2:
        raise ValueError(f"sigma must be >= 2, got {sigma}")
    lam = np.asarray(eigenvalues, dtype=float)
    diffs = grid[:, None] - lam[None, :]
    r_sigma = np.sum(np.where(diffs > 0, diffs, 0.0) ** sigma, axis=1)
    values = r_sigma / (grid + tau) ** (sigma + d / 2.0)

    asserted = grid <= (z_valid_max if z_valid_max is not None else np.inf)
    violations = []
    for i in range(len(grid) - 1):
        if asserted[i] and asserted[i + 1]:
            drop = values[i] - values[i + 1]
            if drop > tolerance * max(1.0, abs(values[i])):
                violations.append(i)

    ceiling = None
    ceiling_ok = True
    if volume is not None:
        ceiling = lieb_thirring_constant(sigma, d) * volume
        ceiling_ok = bool(np.all(values[asserted] <= ceiling
                                 + tolerance * max(1.0, ceiling)))
    return MonotoneCurve(z_grid=grid, values=values, tau=tau, d=d, sigma=sigma,
                         ceiling=ceiling, violations=tuple(violations),
                         ceiling_ok=ceiling_ok, tolerance=tolerance)


def legendre_partial_sum_check(eigenvalues, n: int, w: float, d: int,
                               tau: float = 0.0,
                               tolerance: float = 1e-10) -> BoundReport:
    """Legendre-transform bound on partial sums of (tau-shifted) eigenvalues.

    For w >= n, with z0_n the largest zero of the shifted quadratic
    sum_{j<=n} (z - mu_j)(z - (1+4/d) mu_j), mu_j = lambda_j + tau:

        (w - [w]) mu_{[w]+1} + sum_{k <= [w]} mu_k
            <= z0_n / ((1 + 2/d) n^(2/d)) * w^(1 + 2/d).

    At integer w this is exactly the ratio bound on eigenvalue means.
    """
    from .bounds import shifted_discriminant_and_z0
    if w < n:
        raise ValueError(f"w must be >= n, got w={w}, n={n}")
    lam = np.sort(np.asarray(eigenvalues, dtype=float))
    floor_w = int(math.floor(w))
    if len(lam) < floor_w + 1:
        raise ValueError(f"need the spectrum through index {floor_w + 1}, have {len(lam)}")
    mu = lam + tau
    _, z0 = shifted_discriminant_and_z0(lam[:n], d, tau)
    rhs = z0 / ((1.0 + 2.0 / d) * n ** (2.0 / d)) * w ** (1.0 + 2.0 / d)
    lhs = (w - floor_w) * mu[floor_w] + float(np.sum(mu[:floor_w]))
    return bound_report("legendre-partial-sum", bound=rhs, actual=lhs,
                        tolerance=tolerance,
                        inputs={"n": n, "w": w, "d": d, "tau": tau})


# ---------------------------------------------------------------------------
# exact classical constants
# ---------------------------------------------------------------------------

def gamma_exact(two_x: int) -> tuple[Fraction, int]:
    """Gamma(two_x / 2) as (rational, s) meaning rational * sqrt(pi)^s.

    Integer arguments give factorials (s = 0); half-integer arguments use
    Gamma(n + 1/2) = (2n)! / (4^n n!) sqrt(pi).
    """
    if two_x < 1:
        raise ValueError(f"argument must be >= 1/2, got {two_x}/2")
    if two_x % 2 == 0:
        n = two_x // 2
        return Fraction(math.factorial(n - 1)), 0
    n = (two_x - 1) // 2
    return Fraction(math.factorial(2 * n), 4 ** n * math.factorial(n)), 1


def lieb_thirring_constant_exact(sigma: float, d: int) -> tuple[Fraction, Fraction]:
    """L^cl_{sigma,d} as (mantissa, p) with value mantissa * pi^p, exactly.

    Requires 2*sigma integral (sigma integer or half-integer) and d >= 1.
    """
    two_sigma = round(2 * sigma)
    if abs(2 * sigma - two_sigma) > 1e-12 or sigma < 0:
        raise ValueError(f"sigma must be a nonnegative integer or half-integer, got {sigma}")
    if d < 1:
        raise ValueError(f"dimension must be >= 1, got {d}")
    num, s_num = gamma_exact(two_sigma + 2)
    den, s_den = gamma_exact(two_sigma + d + 2)
    mantissa = num / den * Fraction(1, 2 ** d)
    pi_power = Fraction(-d, 2) + Fraction(s_num - s_den, 2)
    return mantissa, pi_power


def lieb_thirring_constant(sigma: float, d: int) -> float:
    mantissa, power = lieb_thirring_constant_exact(sigma, d)
    return float(mantissa) * math.pi ** float(power)


def unit_ball_volume(d: int) -> float:
    """Volume of the unit ball in R^d."""
    num, s = gamma_exact(d + 2)
    return math.pi ** (d / 2.0) / (float(num) * math.pi ** (s / 2.0))


def sphere_surface_area(d: int) -> float:
    """Surface measure of the unit d-sphere embedded in R^(d+1)."""
    num, s = gamma_exact(d + 1)
    return 2.0 * math.pi ** ((d + 1) / 2.0) / (float(num) * math.pi ** (s / 2.0))


def weyl_constant(d: int) -> float:
    """C_d in the Weyl law lambda_n ~ C_d (n / |Omega|)^{2/d}.

    Ball-volume normalization: C_d = (2 pi)^2 * (unit ball volume)^(-2/d);
    this is the form that reproduces the large-index limit on flat tori (the
    surface-area reading fails that cross-check by a factor pi^... for d=2).
    """
    return 4.0 * math.pi ** 2 * unit_ball_volume(d) ** (-2.0 / d)


@dataclass(frozen=True)
class ClassicalConstants:
    l_cl: float
    c_d: float
    vol_unit_ball: float
    vol_unit_sphere: float


def classical_constants(sigma: float, d: int) -> ClassicalConstants:
    return ClassicalConstants(l_cl=lieb_thirring_constant(sigma, d),
                              c_d=weyl_constant(d),
                              vol_unit_ball=unit_ball_volume(d),
                              vol_unit_sphere=sphere_surface_area(d))
