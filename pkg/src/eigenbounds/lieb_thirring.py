"""Semiclassical alpha-monotonicity and sharp Lieb-Thirring bounds on tori.

For H_alpha = -alpha Laplacian + V on a rectangular torus the map

    alpha -> alpha^{d/2} R_sigma(z - alpha g d / 4; spectrum(alpha))

is nonincreasing for sigma >= 2, and its alpha -> 0 limit is the sharp
semiclassical value L^cl_{sigma,d} int_M (V(x) - z)_-^{sigma + d/2} dx.
That limit yields the Lieb-Thirring bound

    R_sigma(z, alpha) <= alpha^{-d/2} L^cl int_M (V - (z + g d alpha / 4))_-^{sigma+d/2},

whose shift g d / 4 is minimal: scaling it down by 5 percent produces a
detectable monotonicity violation where an eigenvalue crosses the evaluation
point.  Spectra are recomputed per alpha with a cutoff that keeps every
retained Riesz mean truncation-exact; integrals use periodic trapezoid
sums with one Richardson step, refined to a relative target.
"""

import math
from dataclasses import dataclass

import numpy as np

from .reports import BoundReport, bound_report
from .riesz import lieb_thirring_constant, riesz_mean
from .torus import PotentialSpec, TorusGeometry, torus_spectrum

DEFAULT_MIN_MODES = 8


def shift_rate(geometry: TorusGeometry) -> float:
    """g d / 4, the minimal z-shift per unit alpha."""
    return geometry.g * geometry.d / 4.0


def spectrum_at(geometry: TorusGeometry, potential: PotentialSpec, alpha: float,
                k=None, energy_need: float = 0.0,
                safety: float = 4.0,
                min_modes: int = DEFAULT_MIN_MODES):
    """Spectrum at one alpha with every eigenvalue below energy_need retained.

    The box is chosen so the smallest omitted free level exceeds the needed
    energy window by the safety factor, which keeps R_sigma at the evaluation
    point exact despite truncation.
    """
    if alpha <= 0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    window = max(energy_need, 0.0) + potential.sup_abs + geometry.g
    cutoff = safety * window + alpha * geometry.g
    n_req = np.sqrt(cutoff / alpha) / geometry.dual_basis
    n_max = tuple(int(max(min_modes, math.ceil(v) + 1)) for v in n_req)
    return torus_spectrum(geometry, potential, alpha=alpha, k=k, n_max=n_max)


@dataclass(frozen=True, eq=False)
class AlphaScan:
    """alpha -> alpha^{d/2} R_sigma(z - shift * alpha) along a descending grid.

    ``violations`` lists grid indices i where the value drops from alpha_i to
    the smaller alpha_{i+1} beyond tolerance (the map must be nonincreasing in
    alpha, so values may only grow as the grid descends).  ``rhs_limit`` is
    the semiclassical value the scan approaches from below.
    """

    z: float
    sigma: float
    shift: float
    alpha_grid: np.ndarray
    values: np.ndarray
    rhs_limit: float | None
    violations: tuple[int, ...]
    tolerance: float

    @property
    def monotone_ok(self) -> bool:
        return not self.violations


def lt_monotone_scan(geometry: TorusGeometry, potential: PotentialSpec,
                     z: float, sigma: float, alpha_grid,
                     shift_scale: float = 1.0, k=None,
                     tolerance: float = 1e-8,
                     with_limit: bool = True) -> AlphaScan:
    """Evaluate the alpha-monotone map over a descending alpha grid.

    ``shift_scale`` rescales the shift g d / 4 (1.0 is the sharp theorem;
    smaller values are expected to break monotonicity and are provided
    exactly so tests can detect that break).
    """
    grid = np.asarray(alpha_grid, dtype=float)
    if grid.ndim != 1 or len(grid) < 2 or np.any(np.diff(grid) >= 0):
        raise ValueError("alpha_grid must be strictly descending with >= 2 points")
    if np.any(grid <= 0):
        raise ValueError("alpha values must be positive")
    if sigma < 2:
        raise ValueError(f"sigma must be >= 2, got {sigma}")
    rate = shift_scale * shift_rate(geometry)
    d = geometry.d
    values = np.empty(len(grid))
    for i, alpha in enumerate(grid):
        y = z - rate * alpha
        spec = spectrum_at(geometry, potential, alpha, k=k, energy_need=y)
        values[i] = alpha ** (d / 2.0) * riesz_mean(spec.eigenvalues, sigma, y)
    violations = tuple(
        i for i in range(len(grid) - 1)
        if values[i + 1] < values[i] - tolerance * max(1.0, abs(values[i])))
    limit = None
    if with_limit:
        limit = semiclassical_value(geometry, potential, z, sigma)
    return AlphaScan(z=z, sigma=sigma, shift=rate, alpha_grid=grid, values=values,
                     rhs_limit=limit, violations=violations, tolerance=tolerance)


def potential_moment_integral(geometry: TorusGeometry, potential: PotentialSpec,
                              w: float, power: float,
                              rel_tol: float = 1e-7,
                              max_doublings: int = 14) -> float:
    """int_M max(w - V(x), 0)^power dx by periodic trapezoid + Richardson.

    The trapezoid rule on a periodic cell is spectrally accurate away from
    the kink of the positive part; one Richardson step and grid doubling
    drive the estimate to the relative target or raise with diagnostics.
    """
    d = geometry.d
    base = max(8, 8 * max(potential.max_harmonic, default=0))

    def trapezoid(samples: int) -> float:
        axes = [np.arange(samples) / samples for _ in range(d)]
        mesh = np.meshgrid(*axes, indexing="ij")
        vals = np.zeros(mesh[0].shape, dtype=complex)
        for m, amp in potential.coefficients.items():
            phase = sum(mi * ax for mi, ax in zip(m, mesh))
            vals += amp * np.exp(2j * np.pi * phase)
        integrand = np.maximum(w - vals.real, 0.0) ** power
        return float(np.mean(integrand)) * geometry.volume

    coarse = trapezoid(base)
    previous = None
    samples = base
    for _ in range(max_doublings):
        samples *= 2
        fine = trapezoid(samples)
        richardson = (4.0 * fine - coarse) / 3.0
        if previous is not None and abs(richardson - previous) <= rel_tol * max(1.0, abs(richardson)):
            return richardson
        previous = richardson
        coarse = fine
        if samples ** d > 4_000_000:
            break
    if previous is not None and abs(richardson - previous) <= 10 * rel_tol * max(1.0, abs(richardson)):
        return richardson
    raise RuntimeError(f"quadrature did not reach relative {rel_tol:.1e} by "
                       f"{samples} samples per axis (last delta "
                       f"{abs(richardson - (previous or 0.0)):.3e})")


def semiclassical_value(geometry: TorusGeometry, potential: PotentialSpec,
                        z: float, sigma: float) -> float:
    """L^cl_{sigma,d} int_M (V(x) - z)_-^{sigma + d/2} dx."""
    d = geometry.d
    return lieb_thirring_constant(sigma, d) \
        * potential_moment_integral(geometry, potential, z, sigma + d / 2.0)


def lt_rhs_and_slack(geometry: TorusGeometry, potential: PotentialSpec,
                     z: float, alpha: float, sigma: float, k=None,
                     tolerance: float = 1e-9) -> BoundReport:
    """Sharp Lieb-Thirring bound at one alpha.

    lhs = R_sigma(z; spectrum(alpha)),
    rhs = alpha^{-d/2} L^cl int_M (V - (z + g d alpha / 4))_-^{sigma + d/2}.
    """
    d = geometry.d
    w = z + shift_rate(geometry) * alpha
    spec = spectrum_at(geometry, potential, alpha, k=k, energy_need=z)
    lhs = riesz_mean(spec.eigenvalues, sigma, z)
    rhs = alpha ** (-d / 2.0) * lieb_thirring_constant(sigma, d) \
        * potential_moment_integral(geometry, potential, w, sigma + d / 2.0)
    note = {}
    if d > 1 and len(set(geometry.lengths)) > 1:
        note["cell"] = "non-square"
    return bound_report("lieb-thirring", bound=rhs, actual=lhs,
                        tolerance=tolerance,
                        inputs={"z": z, "alpha": alpha, "sigma": sigma, **note})


@dataclass(frozen=True, eq=False)
class SemiclassicalReport:
    """Approach of the shifted scan values to the semiclassical limit."""

    alphas: np.ndarray
    values: np.ndarray
    limit: float
    gaps: np.ndarray
    final_relative_gap: float
    gaps_decreasing: bool
    from_below: bool

    @property
    def passed(self) -> bool:
        return self.gaps_decreasing and self.from_below


def semiclassical_limit_check(geometry: TorusGeometry, potential: PotentialSpec,
                              z: float, sigma: float, alphas,
                              drift_tol: float = 1e-6) -> SemiclassicalReport:
    """Convergence of alpha^{d/2} R_sigma(z - alpha g d / 4) to the limit.

    The shifted evaluation point makes the approach monotone from below (the
    unshifted sequence provably oscillates when an eigenvalue crosses z).
    Each spectrum is recomputed at a refined cutoff and a drift beyond
    drift_tol raises, so truncation never masquerades as convergence.
    """
    grid = np.asarray(alphas, dtype=float)
    if np.any(np.diff(grid) >= 0) or np.any(grid <= 0):
        raise ValueError("alphas must be positive and strictly descending")
    d = geometry.d
    rate = shift_rate(geometry)
    values = np.empty(len(grid))
    for i, alpha in enumerate(grid):
        y = z - rate * alpha
        spec = spectrum_at(geometry, potential, alpha, energy_need=y)
        value = alpha ** (d / 2.0) * riesz_mean(spec.eigenvalues, sigma, y)
        refined = spectrum_at(geometry, potential, alpha, energy_need=y, safety=6.0)
        drift = abs(alpha ** (d / 2.0) * riesz_mean(refined.eigenvalues, sigma, y) - value)
        if drift > drift_tol * max(1.0, abs(value)):
            raise RuntimeError(f"cutoff-drift {drift:.3e} at alpha={alpha}; "
                               "basis too small for this evaluation point")
        values[i] = value
    limit = semiclassical_value(geometry, potential, z, sigma)
    gaps = limit - values
    return SemiclassicalReport(
        alphas=grid, values=values, limit=limit, gaps=gaps,
        final_relative_gap=float(abs(gaps[-1]) / max(abs(limit), 1e-300)),
        gaps_decreasing=bool(np.all(np.diff(gaps) <= 1e-12 * max(1.0, abs(limit)))),
        from_below=bool(np.all(gaps >= -1e-10 * max(1.0, abs(limit)))))


@dataclass(frozen=True, eq=False)
class BandAverageReport:
    """Band-averaged Riesz moment against the Lieb-Thirring cap."""

    band_averages: np.ndarray
    averaged_moment: float
    mean_of_moments: float
    cap: float
    convexity: BoundReport
    bound: BoundReport


def band_average_check(geometry: TorusGeometry, potential: PotentialSpec,
                       alpha: float, z: float, sigma: float, k_grid,
                       tolerance: float = 1e-8) -> BandAverageReport:
    """Average bands over quasimomenta and verify convexity plus the cap.

    Bands are tracked by sorted index at each k (crossings are averaged by
    position, which is what the averaged bound is stated for).  Convexity of
    the positive-part power gives

        sum_j (z - <lambda_j>)_+^sigma <= mean_k sum_j (z - lambda_j(k))_+^sigma,

    and each quasimomentum obeys the Lieb-Thirring cap, hence so do both sides.
    """
    ks = np.atleast_2d(np.asarray(k_grid, dtype=float))
    if ks.shape[1] != geometry.d:
        raise ValueError(f"k grid must have {geometry.d} columns, got {ks.shape}")
    spectra = []
    moments = []
    for k in ks:
        spec = spectrum_at(geometry, potential, alpha, k=k, energy_need=z)
        spectra.append(spec.eigenvalues)
        moments.append(riesz_mean(spec.eigenvalues, sigma, z))
    n_bands = min(len(s) for s in spectra)
    bands = np.stack([s[:n_bands] for s in spectra])
    averages = bands.mean(axis=0)
    averaged_moment = riesz_mean(averages, sigma, z)
    mean_of_moments = float(np.mean(moments))
    convexity = bound_report("band-average-convexity", bound=mean_of_moments,
                             actual=averaged_moment, tolerance=tolerance,
                             inputs={"k_points": len(ks), "sigma": sigma})
    d = geometry.d
    w = z + shift_rate(geometry) * alpha
    cap = alpha ** (-d / 2.0) * lieb_thirring_constant(sigma, d) \
        * potential_moment_integral(geometry, potential, w, sigma + d / 2.0)
    bound = bound_report("band-average-lieb-thirring", bound=cap,
                         actual=averaged_moment, tolerance=tolerance,
                         inputs={"z": z, "alpha": alpha, "sigma": sigma})
    return BandAverageReport(band_averages=averages,
                             averaged_moment=averaged_moment,
                             mean_of_moments=mean_of_moments,
                             cap=cap, convexity=convexity, bound=bound)
