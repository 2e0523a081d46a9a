"""Exact integer-lattice spectra, Gauss circle counting, and the 1D gap example.

Flat-torus Laplacian spectra are the values of a diagonal quadratic form on
integer vectors; for integral coefficient forms every count and Riesz mean
below is computed in exact integer or rational arithmetic, so sharpness
claims never hinge on rounding.  Floating point enters only through bounds
that carry a factor of pi.
"""

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .reports import BoundReport, bound_report


def _as_exact(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, np.integer)):
        return Fraction(int(x))
    return Fraction(x)  # exact binary value of a float


def _check_form(coefficients) -> tuple[int, ...]:
    coeffs = tuple(int(c) for c in np.atleast_1d(coefficients))
    if not 1 <= len(coeffs) <= 3 or any(c < 1 for c in coeffs):
        raise ValueError(f"need 1 to 3 positive integer coefficients, got {coefficients}")
    return coeffs


def lattice_count(x, coefficients=(1, 1)) -> int:
    """#{n integer vector : sum_l c_l n_l^2 <= x}, exactly.

    Row-wise integer square roots; for the default form this is the Gauss
    circle count R(x).
    """
    coeffs = _check_form(coefficients)
    cap = _as_exact(x)
    if cap < 0:
        raise ValueError(f"x must be >= 0, got {x}")
    budget = math.floor(cap)

    def axis_count(limit: int, c: int) -> int:
        return 2 * math.isqrt(limit // c) + 1 if limit >= 0 else 0

    if len(coeffs) == 1:
        return axis_count(budget, coeffs[0])
    if len(coeffs) == 2:
        c1, c2 = coeffs
        total = 0
        for m in range(-math.isqrt(budget // c1), math.isqrt(budget // c1) + 1):
            total += axis_count(budget - c1 * m * m, c2)
        return total
    c1, c2, c3 = coeffs
    total = 0
    for m in range(-math.isqrt(budget // c1), math.isqrt(budget // c1) + 1):
        rem = budget - c1 * m * m
        for n in range(-math.isqrt(rem // c2), math.isqrt(rem // c2) + 1):
            total += axis_count(rem - c2 * n * n, c3)
    return total


@dataclass(frozen=True, eq=False)
class LatticeSpectrum:
    """Distinct form values <= x_max with multiplicities, ascending."""

    d: int
    coefficients: tuple[int, ...]
    x_max: int
    values: tuple[int, ...]
    multiplicities: tuple[int, ...]

    @classmethod
    def enumerate(cls, x_max, coefficients=(1, 1)) -> "LatticeSpectrum":
        coeffs = _check_form(coefficients)
        budget = math.floor(_as_exact(x_max))
        if budget < 0:
            raise ValueError(f"x_max must be >= 0, got {x_max}")
        counts: dict[int, int] = {}
        ranges = [range(-math.isqrt(budget // c), math.isqrt(budget // c) + 1)
                  for c in coeffs]
        for point in np.stack(np.meshgrid(*ranges, indexing="ij"), axis=-1).reshape(-1, len(coeffs)):
            val = int(sum(c * int(v) ** 2 for c, v in zip(coeffs, point)))
            if val <= budget:
                counts[val] = counts.get(val, 0) + 1
        values = tuple(sorted(counts))
        return cls(d=len(coeffs), coefficients=coeffs, x_max=budget,
                   values=values,
                   multiplicities=tuple(counts[v] for v in values))

    @property
    def total_count(self) -> int:
        return sum(self.multiplicities)

    def eigenvalues(self, count: int | None = None) -> np.ndarray:
        flat = np.repeat(np.array(self.values, dtype=float),
                         np.array(self.multiplicities))
        return flat if count is None else flat[:count]


def nth_eigenvalue(n: int, coefficients=(1, 1)) -> int:
    """The n-th smallest form value (1-based, with multiplicity), by bisection
    on the exact counting function."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    lo, hi = 0, 1
    while lattice_count(hi, coefficients) < n:
        hi *= 2
    while lo < hi:
        mid = (lo + hi) // 2
        if lattice_count(mid, coefficients) >= n:
            hi = mid
        else:
            lo = mid + 1
    return lo


@dataclass(frozen=True)
class RieszCounts:
    """One Riesz mean evaluated by the two exact routes."""

    direct: Fraction
    via_integral: Fraction
    delta2: float | None

    @property
    def agree(self) -> bool:
        return self.direct == self.via_integral


def riesz_from_counting(x, sigma: int, coefficients=(1, 1),
                        spectrum: LatticeSpectrum | None = None) -> RieszCounts:
    """R_sigma(x) directly and through the counting-function integral.

    direct        = sum over form values v <= x of (x - v)^sigma,
    via_integral  = sigma int_0^x (x - t)^{sigma-1} R(t) dt, integrated
                    piecewise between the jump points of the step function R.
    Both are exact rationals and must agree identically; for sigma = 2 the
    Weyl fluctuation delta2 = (R_2(x) - pi x^3 / 3) / 2 is attached.
    """
    if sigma not in (1, 2):
        raise ValueError(f"sigma must be 1 or 2, got {sigma}")
    cap = _as_exact(x)
    if cap < 0:
        raise ValueError(f"x must be >= 0, got {x}")
    if spectrum is None or spectrum.x_max < cap:
        spectrum = LatticeSpectrum.enumerate(math.floor(cap), coefficients)

    exact_cap = int(cap) if cap.denominator == 1 else cap  # pure-int fast path
    direct = 0
    for v, mult in zip(spectrum.values, spectrum.multiplicities):
        if v <= exact_cap:
            direct += mult * (exact_cap - v) ** sigma

    knots = [v for v in spectrum.values if v <= exact_cap] + [exact_cap]
    running = 0
    via = 0
    for i in range(len(knots) - 1):
        running += spectrum.multiplicities[i]
        a, b = knots[i], knots[i + 1]
        # int_a^b (x - t)^(sigma-1) dt, times sigma * R on [a, b)
        via += running * ((exact_cap - a) ** sigma - (exact_cap - b) ** sigma)
    direct = Fraction(direct)
    via = Fraction(via)
    delta2 = None
    if sigma == 2:
        delta2 = float((direct - Fraction(math.pi) * cap ** 3 / 3) / 2)
    return RieszCounts(direct=direct, via_integral=via, delta2=delta2)


@dataclass(frozen=True)
class CircleBoundRecord:
    x: float
    count: int
    r2_direct: Fraction
    r2_integral: Fraction
    delta2: float
    weyl_bound_slack: float
    delta2_bound_slack: float
    routes_agree: bool
    consistency_residual: float


def circle_bound_checks(x_grid, spectrum: LatticeSpectrum | None = None) -> list[CircleBoundRecord]:
    """Second Riesz mean of the circle problem against its closed-form caps.

    At every grid point: R_2(x) <= (pi/3)(x + 1/2)^3 and the equivalent
    fluctuation form delta2(x) <= (pi/48)(12 x^2 + 6 x + 1); the algebraic
    identity between the two caps is re-verified to 1e-12.
    """
    xs = sorted(float(v) for v in np.atleast_1d(x_grid))
    if xs and xs[0] < 0:
        raise ValueError("grid points must be >= 0")
    if spectrum is None:
        spectrum = LatticeSpectrum.enumerate(math.floor(xs[-1]) if xs else 0, (1, 1))
    records = []
    for x in xs:
        counts = riesz_from_counting(x, 2, spectrum=spectrum)
        r2 = float(counts.direct)
        cap_weyl = math.pi / 3.0 * (x + 0.5) ** 3
        cap_delta = math.pi / 48.0 * (12.0 * x * x + 6.0 * x + 1.0)
        consistency = abs(cap_delta - (cap_weyl - math.pi / 3.0 * x ** 3) / 2.0) \
            / max(1.0, cap_delta)
        records.append(CircleBoundRecord(
            x=x, count=lattice_count(x), r2_direct=counts.direct,
            r2_integral=counts.via_integral, delta2=counts.delta2,
            weyl_bound_slack=cap_weyl - r2,
            delta2_bound_slack=cap_delta - counts.delta2,
            routes_agree=counts.agree,
            consistency_residual=consistency))
    return records


@dataclass(frozen=True)
class OneDGapReport:
    """Structural facts of the 1D periodic gap example at N = 2n + 1.

    With eigenvalues g j^2 (j integer) and the shift g/4, the discriminant of
    the free gap polynomial equals the squared half-gap; both are g^2 N^2 / 4.
    ``mixed_convention_value`` is pi^2 N^2, the value this discriminant is
    sometimes quoted as under inconsistent period conventions; it is reported
    for comparison, never asserted.  ``critical_point_residuals`` are the
    exact rational values of (z + g/4) R_2'(z) - (5/2) R_2(z) at the distinct
    eigenvalues, all of which must vanish; shrinking the shift by 5 percent
    must make at least one of them strictly negative.
    """

    n_half: int
    big_n: int
    g: float
    discriminant: float
    gap_square: float
    exact_equal: bool
    mixed_convention_value: float
    critical_point_residuals: tuple[Fraction, ...]
    reduced_shift_strict_drop: bool


def _ratio_derivative_bracket(shift: Fraction, z: Fraction) -> Fraction:
    """(z + shift) R_2'(z) - (5/2) R_2(z) on the spectrum {j^2, j in Z}, exact."""
    r1 = Fraction(0)
    r2 = Fraction(0)
    reach = math.isqrt(max(math.ceil(z), 0)) + 1
    for j in range(-reach, reach + 1):
        diff = z - j * j
        if diff > 0:
            r1 += diff
            r2 += diff * diff
    return (z + shift) * 2 * r1 - Fraction(5, 2) * r2


def one_d_gap_example(n: int, period: float = 2.0 * math.pi,
                      max_critical_points: int | None = 64) -> OneDGapReport:
    """Gap discriminant and shift sharpness for the free 1D periodic Laplacian.

    All structural identities are established in units of g = (2 pi / period)^2
    with exact rationals (the spectrum is g j^2), so they hold for every
    period; g only rescales the reported floats.  Critical-point residuals are
    evaluated at the distinct eigenvalues through the gap top, capped at
    max_critical_points of them (the identity is per-eigenvalue, so the cap
    only limits report size, not the discriminant check).
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    big_n = 2 * n + 1
    g = (2.0 * math.pi / period) ** 2

    # eigenvalues in units of g: 0, 1, 1, 4, 4, ..., n^2, n^2  (N of them)
    lam = [0] + [k * k for k in range(1, n + 1) for _ in (0, 1)]
    mean = Fraction(sum(lam), big_n)
    mean_sq = Fraction(sum(v * v for v in lam), big_n)
    disc = (3 * mean + Fraction(1, 2)) ** 2 - 5 * mean_sq - mean
    gap_sq = Fraction((n + 1) ** 2 - n * n, 2) ** 2
    exact_equal = disc == gap_sq == Fraction(big_n ** 2, 4)

    reach = n + 2 if max_critical_points is None else min(n + 2, max_critical_points)
    residuals = tuple(_ratio_derivative_bracket(Fraction(1, 4), Fraction(j * j))
                      for j in range(0, reach))
    reduced = [_ratio_derivative_bracket(Fraction(95, 400), Fraction(j * j))
               for j in range(1, reach)]
    return OneDGapReport(
        n_half=n, big_n=big_n, g=g,
        discriminant=float(disc) * g * g,
        gap_square=float(gap_sq) * g * g,
        exact_equal=exact_equal,
        mixed_convention_value=math.pi ** 2 * big_n ** 2,
        critical_point_residuals=residuals,
        reduced_shift_strict_drop=any(r < 0 for r in reduced))
