import numpy as np
import pytest
from numpy.testing import assert_allclose

from eigenbounds.torus import (
    PlaneWaveBasis,
    PotentialSpec,
    TorusGeometry,
    assemble_hamiltonian,
    commutator_representation_check,
    kinetic_terms,
    solve_spectrum,
    torus_spectrum,
)

TWO_PI = 2.0 * np.pi


@pytest.fixture
def circle():
    return TorusGeometry((TWO_PI,))


@pytest.fixture
def mathieu(circle):
    # V = 2 cos x, i.e. coefficients 1 at harmonics +1 and -1
    return PotentialSpec.cosine((1,), 2.0)


def test_geometry_derived_quantities():
    geom = TorusGeometry((TWO_PI, np.pi))
    assert geom.d == 2
    assert_allclose(geom.dual_basis, [1.0, 2.0])
    assert_allclose(geom.dual_basis * np.asarray(geom.lengths), TWO_PI)
    assert_allclose(geom.g, (1.0 + 4.0) / 2.0)
    assert_allclose(geom.volume, TWO_PI * np.pi)


def test_potential_requires_hermitian_coefficients():
    with pytest.raises(ValueError):
        PotentialSpec(1, {(1,): 1.0})
    pot = PotentialSpec(1, {(1,): 0.5 + 0.25j, (-1,): 0.5 - 0.25j})
    assert pot.max_harmonic == (1,)


def test_potential_sup_values(mathieu):
    assert_allclose(mathieu.sup_value, 2.0, atol=1e-12)
    assert_allclose(mathieu.inf_value, -2.0, atol=1e-12)
    assert mathieu.coefficient_sum_bound() >= mathieu.sup_value - 1e-12
    const = PotentialSpec.constant(1, -3.0)
    assert_allclose(const.sup_value, -3.0)
    assert_allclose(const.sup_abs, 3.0)


def test_basis_box_and_index_roundtrip():
    basis = PlaneWaveBasis.box((2, 3))
    assert basis.size == 5 * 7
    idx, valid = basis.index_of(basis.modes)
    assert valid.all()
    assert_allclose(basis.modes[idx], basis.modes)
    idx, valid = basis.index_of(np.array([[3, 0], [0, 4]]))
    assert not valid.any()


def test_free_hamiltonian_is_diagonal_squares(circle):
    basis = PlaneWaveBasis.box((4,))
    h = assemble_hamiltonian(circle, PotentialSpec.zero(1), 1.0, None, basis)
    assert_allclose(h, np.diag((basis.modes[:, 0].astype(float)) ** 2), atol=1e-15)


def test_mathieu_matrix_is_tridiagonal(circle, mathieu):
    basis = PlaneWaveBasis.box((3,))
    h = assemble_hamiltonian(circle, mathieu, 1.0, None, basis)
    n = basis.modes[:, 0].astype(float)
    expected = np.diag(n ** 2) + np.diag(np.ones(6), 1) + np.diag(np.ones(6), -1)
    assert_allclose(h, expected, atol=1e-15)


def test_2d_free_spectrum_is_sorted_sum_of_squares():
    geom = TorusGeometry((TWO_PI, TWO_PI))
    spec = torus_spectrum(geom, PotentialSpec.zero(2), n_max=5)
    m, n = np.meshgrid(np.arange(-5, 6), np.arange(-5, 6))
    exact = np.sort((m ** 2 + n ** 2).ravel()).astype(float)
    assert_allclose(spec.eigenvalues, exact, atol=1e-10)


def test_free_1d_spectrum(circle):
    spec = torus_spectrum(circle, PotentialSpec.zero(1), n_max=4)
    assert_allclose(spec.eigenvalues, [0, 1, 1, 4, 4, 9, 9, 16, 16], atol=1e-12)


def test_harmonic_beyond_representable_range_rejected(circle):
    pot = PotentialSpec.cosine((5,), 1.0)
    basis = PlaneWaveBasis.box((2,))
    with pytest.raises(ValueError):
        assemble_hamiltonian(circle, pot, 1.0, None, basis)


def test_quasimomentum_outside_cell_rejected(circle, mathieu):
    basis = PlaneWaveBasis.box((4,))
    with pytest.raises(ValueError):
        assemble_hamiltonian(circle, mathieu, 1.0, (0.7,), basis)


def test_mathieu_cutoff_refinement(circle, mathieu):
    coarse = torus_spectrum(circle, mathieu, n_max=20)
    fine = torus_spectrum(circle, mathieu, n_max=40)
    assert coarse.basis.size == 41
    assert abs(coarse.eigenvalues[0] - fine.eigenvalues[0]) <= 1e-8


def test_eigenvalues_monotone_under_cutoff_refinement(circle, mathieu):
    previous = None
    for n_max in (8, 12, 16):
        spec = torus_spectrum(circle, mathieu, n_max=n_max)
        head = spec.eigenvalues[:10]
        if previous is not None:
            assert np.all(head <= previous + 1e-10)
        previous = head


def test_time_reversal_spectrum(circle, mathieu):
    plus = torus_spectrum(circle, mathieu, k=(0.3,), n_max=16)
    minus = torus_spectrum(circle, mathieu, k=(-0.3,), n_max=16)
    assert_allclose(plus.eigenvalues, minus.eigenvalues, atol=1e-9)


def test_free_spectrum_with_quasimomentum(circle):
    spec = torus_spectrum(circle, PotentialSpec.zero(1), k=(0.25,), n_max=6)
    exact = np.sort((np.arange(-6, 7) + 0.25) ** 2)
    assert_allclose(spec.eigenvalues, exact, atol=1e-12)


def test_kinetic_terms_free_mode(circle):
    spec = torus_spectrum(circle, PotentialSpec.zero(1), k=(0.25,), n_max=6)
    kt = kinetic_terms(spec, PotentialSpec.zero(1), 0)
    assert_allclose(kt.t, 0.25 ** 2, atol=1e-12)
    assert kt.v == pytest.approx(0.0, abs=1e-12)
    assert kt.fh_residual is not None and kt.fh_residual <= 1e-6


def test_kinetic_terms_mathieu_ground(circle, mathieu):
    spec = torus_spectrum(circle, mathieu, n_max=20)
    kt = kinetic_terms(spec, mathieu, 0)
    assert kt.identity_residual <= 1e-9
    assert not kt.crossing
    assert kt.fh_residual <= 1e-7


def test_kinetic_terms_flags_degenerate_cluster(circle):
    spec = torus_spectrum(circle, PotentialSpec.zero(1), n_max=6)
    kt = kinetic_terms(spec, PotentialSpec.zero(1), 1)   # the degenerate pair at 1
    assert kt.clustered and kt.crossing
    assert kt.fh_residual is None


def test_alpha_scaling_of_kinetic_identity(circle, mathieu):
    spec = torus_spectrum(circle, mathieu, alpha=0.3, n_max=16)
    kt = kinetic_terms(spec, mathieu, 0)
    assert_allclose(spec.eigenvalues[0], 0.3 * kt.t + kt.v, atol=1e-9)


def test_commutator_representation_free(circle):
    """[H, exp(-iqx)] maps the mode n to (1 - 2n) times mode n-1 when q = 1."""
    spec = torus_spectrum(circle, PotentialSpec.zero(1), n_max=8)
    rep = commutator_representation_check(spec, (1,))
    assert rep.relative_residual <= 1e-12
    h = spec.reconstruct_hamiltonian()
    from eigenbounds.torus import shift_matrix
    s = shift_matrix(spec.basis, (1,))
    ch = h @ s - s @ h
    modes = spec.basis.modes[:, 0]
    col = int(np.where(modes == 3)[0][0])
    dest = int(np.where(modes == 2)[0][0])
    expected = np.zeros(spec.basis.size)
    expected[dest] = 1.0 - 2.0 * 3.0
    assert_allclose(ch[:, col].real, expected, atol=1e-10)


def test_commutator_representation_with_potential(circle, mathieu):
    spec = torus_spectrum(circle, mathieu, n_max=12)
    rep = commutator_representation_check(spec, (1,))
    assert rep.relative_residual <= 1e-10


def test_commutator_representation_2d():
    geom = TorusGeometry((TWO_PI, TWO_PI))
    spec = torus_spectrum(geom, PotentialSpec.zero(2), n_max=4)
    rep = commutator_representation_check(spec, (1, 0))
    assert rep.relative_residual <= 1e-10


def test_commutator_representation_needs_interior_modes(circle):
    spec = torus_spectrum(circle, PotentialSpec.zero(1), n_max=1)
    with pytest.raises(ValueError):
        commutator_representation_check(spec, (1,))


def test_solve_spectrum_validates(circle):
    basis = PlaneWaveBasis.box((3,))
    h = assemble_hamiltonian(circle, PotentialSpec.zero(1), 1.0, None, basis)
    spec = solve_spectrum(h, circle, basis, 1.0)
    ortho = spec.vectors.conj().T @ spec.vectors
    assert_allclose(ortho, np.eye(basis.size), atol=1e-10)
