import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from eigenbounds.riesz import lieb_thirring_constant, monotone_ratio_curve
from eigenbounds.spheres import (
    SphereSpec,
    geom_inequality_slack,
    level_multiplicity,
    reilly_sphere_check,
    sphere_eigenvalues,
    sphere_volume,
    weyl_counting_ratio,
)


def test_circle_spectrum():
    spec = SphereSpec(d=1, radius=1.0, levels=4)
    assert_allclose(sphere_eigenvalues(spec), [0, 1, 1, 4, 4, 9, 9, 16, 16])


def test_s2_spectrum_and_multiplicities():
    spec = SphereSpec(d=2, radius=1.0, levels=3)
    lam = sphere_eigenvalues(spec)
    assert_allclose(lam, [0] + [2] * 3 + [6] * 5 + [12] * 7)
    assert [level_multiplicity(l, 2) for l in range(4)] == [1, 3, 5, 7]


def test_multiplicity_recursion_cross_check():
    """Multiplicities satisfy the two-term recursion of binomial sums: the
    count of degree-l harmonics equals the number of degree-l monomials minus
    the number of degree-(l-2) monomials, in every dimension."""
    for d in (1, 2, 3, 4):
        for l in range(8):
            monomials = math.comb(l + d, d)
            lower = math.comb(l + d - 2, d) if l >= 2 else 0
            assert level_multiplicity(l, d) == monomials - lower
    assert [level_multiplicity(l, 3) for l in range(4)] == [1, 4, 9, 16]


def test_radius_scaling():
    small = sphere_eigenvalues(SphereSpec(d=2, radius=1.0, levels=5))
    big = sphere_eigenvalues(SphereSpec(d=2, radius=2.0, levels=5))
    assert_allclose(big, small / 4.0)


def test_sphere_volume_values():
    assert sphere_volume(1, 1.0) == pytest.approx(2 * math.pi, rel=1e-14)
    assert sphere_volume(2, 1.0) == pytest.approx(4 * math.pi, rel=1e-14)
    assert sphere_volume(2, 3.0) == pytest.approx(36 * math.pi, rel=1e-14)
    assert sphere_volume(3, 1.0) == pytest.approx(2 * math.pi ** 2, rel=1e-14)


def test_geom_inequality_sharp_at_first_gap():
    circle = SphereSpec(d=1, radius=1.0, levels=6)
    rep = geom_inequality_slack(circle, 1, 1.0)
    assert rep.bound == pytest.approx(1.0, abs=1e-14)
    assert rep.slack == pytest.approx(0.0, abs=1e-14)
    s2 = SphereSpec(d=2, radius=1.0, levels=6)
    rep2 = geom_inequality_slack(s2, 1, 2.0)
    assert rep2.slack == pytest.approx(0.0, abs=1e-14)


def test_geom_inequality_interior_and_validation():
    s2 = SphereSpec(d=2, radius=1.0, levels=8)
    lam = sphere_eigenvalues(s2)
    rep = geom_inequality_slack(s2, 4, float(lam[3]))   # z at the block bottom
    assert rep.slack >= -1e-12
    with pytest.raises(ValueError):
        geom_inequality_slack(s2, 1, 2.5)


def test_geom_inequality_sampled_gaps():
    rng = np.random.default_rng(8)
    for d in (1, 2, 3):
        spec = SphereSpec(d=d, radius=1.0, levels=12)
        lam = sphere_eigenvalues(spec)
        gaps = [n for n in range(1, len(lam)) if lam[n] > lam[n - 1] + 1e-9]
        for _ in range(50):
            n = int(rng.choice(gaps))
            z = float(rng.uniform(lam[n - 1], lam[n]))
            assert geom_inequality_slack(spec, n, z).slack >= -1e-10


def test_reilly_classic_sharp_on_s2():
    spec = SphereSpec(d=2, radius=1.0, levels=10)
    records = reilly_sphere_check(spec, 3)
    first = records[0]
    assert first.lam_next == pytest.approx(2.0)
    assert first.weak.bound == pytest.approx(2.0, abs=1e-14)   # h^2/d, sharp
    assert first.sharp.bound == pytest.approx(5.0, abs=1e-14)
    assert all(r.sharp.passed and r.weak.passed for r in records)


def test_reilly_all_spheres_to_50():
    for d, levels in ((1, 30), (2, 10), (3, 8)):
        spec = SphereSpec(d=d, radius=1.0, levels=levels)
        records = reilly_sphere_check(spec, 50)
        assert all(r.sharp.slack >= 0.0 for r in records)
        assert all(r.weak.slack >= -1e-12 for r in records)


def test_reilly_slack_radius_homogeneity():
    base = reilly_sphere_check(SphereSpec(d=2, radius=1.0, levels=8), 20)
    scaled = reilly_sphere_check(SphereSpec(d=2, radius=2.0, levels=8), 20)
    for a, b in zip(base, scaled):
        assert b.sharp.slack == pytest.approx(a.sharp.slack / 4.0, rel=1e-12, abs=1e-15)


def test_weyl_counting_ratio_s2():
    assert abs(weyl_counting_ratio(SphereSpec(d=2, radius=1.0, levels=40)) - 1.0) <= 0.03


def test_monotone_ratio_on_spheres():
    for d, levels in ((1, 40), (2, 25)):
        spec = SphereSpec(d=d, radius=1.0, levels=levels)
        lam = sphere_eigenvalues(spec)
        tau = spec.h ** 2 / 4.0
        top = spec.level_eigenvalue(levels)
        grid = np.linspace(0.5, 0.8 * top, 300)
        curve = monotone_ratio_curve(lam, tau, d, grid, volume=spec.volume,
                                     z_valid_max=0.8 * top)
        assert curve.monotone_ok
        assert curve.ceiling == pytest.approx(
            lieb_thirring_constant(2, d) * spec.volume, rel=1e-12)
        assert curve.ceiling_ok
