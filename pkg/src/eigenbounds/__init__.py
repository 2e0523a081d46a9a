"""Verification lab for spectral trace identities and universal eigenvalue bounds.

Exact finite matrices, plane-wave torus discretizations, integer-lattice
spectra, and round spheres, each checked against the commutator trace
identities, Bethe-type sum rules, quadratic eigenvalue bounds, Riesz-mean
monotonicity, and sharp Lieb-Thirring inequalities they are supposed to obey.
"""

__version__ = "0.1.0"

from .reports import BoundReport, IdentityResidualReport, bound_report, identity_report
from .matrix_oracle import (
    HermitianMatrixModel,
    ProjectorSpec,
    commutator,
    discrete_sum_rule_residual,
    f_gap_slack,
    gap_slack,
    random_gapped_model,
    random_model,
    second_commutator_identity_residual,
    shifted_trace_residual,
)
from .torus import (
    PlaneWaveBasis,
    PotentialSpec,
    SpectrumResult,
    TorusGeometry,
    assemble_hamiltonian,
    kinetic_terms,
    solve_spectrum,
    torus_spectrum,
)
from .sum_rules import OverlapMatrix, leading_identity_residual, moment_sum_rules, overlap_matrix
from .bounds import (
    SpectrumPrefix,
    difference_inequality_slack,
    lambda_next_bound,
    quad_poly_value,
    reilly_bound,
    z0_and_ratio_bounds,
)
from .riesz import (
    classical_constants,
    lieb_thirring_constant,
    monotone_ratio_curve,
    riesz_mean,
    weyl_constant,
)
from .lattice import (
    LatticeSpectrum,
    circle_bound_checks,
    lattice_count,
    one_d_gap_example,
    riesz_from_counting,
)
from .spheres import SphereSpec, geom_inequality_slack, reilly_sphere_check, sphere_eigenvalues
from .lieb_thirring import (
    band_average_check,
    lt_monotone_scan,
    lt_rhs_and_slack,
    semiclassical_limit_check,
)
