"""Nonreciprocal quantum synchronization of antiferromagnet magnons in a two-post cavity."""

from nqsync.bogoliubov import Anticrossing, DispersionPoint, anticrossing, dispersion_matrix, dispersion_sweep
from nqsync.linalg import (
    Spectrum, eigenvalues_general, eigenvalues_symmetric, is_physical, is_stable, solve_lyapunov,
    symplectic_eigenvalues,
)
from nqsync.model import (
    CavityMode, DerivedQuantities, SystemParams, build_drift_matrix, build_noise_matrix,
    coupling_from_geometry, derive, fig2_params,
)
from nqsync.oracle import IntegrationReport, default_step, integrate_covariance
from nqsync.sweep import (
    Axis, MaterialPreset, SweepRow, SweepSpec, builtin_materials, material, run_material_suite, run_sweep,
)
from nqsync.sync import SyncResult, nonreciprocal_pair, sir, sync_degree

__version__ = "0.1.0"
