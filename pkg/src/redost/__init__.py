"""Periodic travelling waves of the reduced Ostrovsky equations.

Library for computing periodic wave profiles of the quadratic and cubic
reduced Ostrovsky equations (and the focusing short-pulse variant), the
Floquet-Bloch spectrum of the Lyapunov-functional Hessian at those waves,
and the interval of speed parameters on which that Hessian is positive,
which certifies orbital stability.  Every numerical path is validated
against closed-form small-amplitude asymptotics.
"""

from .asymptotics import (
    SpectrumSummary,
    c_pm,
    dispersion,
    dispersion_factorized,
    stokes_profile,
    terminal_profile,
    unperturbed_spectrum,
)
from .bands import BandSet, asymptotic_bands, band_curvature, compute_bands
from .core import (
    AsymptoticConstants,
    EquationKind,
    SpectralGrid,
    WaveProfile,
    asymptotic_constants,
    fourier_eval,
)
from .errors import (
    AliasingFailure,
    BandMisidentification,
    ComplexPencil,
    EigensolverFailure,
    MeanNonzero,
    NoConvergence,
    NoPositiveReference,
    RangeViolation,
    RedostError,
    UnsupportedEquation,
    ValidityViolation,
)
from .functionals import FunctionalValue, casimir_multiplier, evaluate
from .operators import (
    BlochOperator,
    assemble,
    perturbation_eigenvalue_L,
    perturbation_eigenvalue_M,
    smallest_eigenvalues,
)
from .positivity import (
    PositivityBoundary,
    PositivityCheck,
    check_positive,
    find_c_boundaries,
    scan_region,
)
from .profile_io import read_profile, write_profile
from .solver import compute_invariant, continue_family, solve_wave

__version__ = "0.1.0"

__all__ = [
    "AliasingFailure",
    "AsymptoticConstants",
    "BandMisidentification",
    "BandSet",
    "BlochOperator",
    "ComplexPencil",
    "EigensolverFailure",
    "EquationKind",
    "FunctionalValue",
    "MeanNonzero",
    "NoConvergence",
    "NoPositiveReference",
    "PositivityBoundary",
    "PositivityCheck",
    "RangeViolation",
    "RedostError",
    "SpectralGrid",
    "SpectrumSummary",
    "UnsupportedEquation",
    "ValidityViolation",
    "WaveProfile",
    "assemble",
    "asymptotic_bands",
    "asymptotic_constants",
    "band_curvature",
    "c_pm",
    "casimir_multiplier",
    "check_positive",
    "compute_bands",
    "compute_invariant",
    "continue_family",
    "dispersion",
    "dispersion_factorized",
    "evaluate",
    "find_c_boundaries",
    "fourier_eval",
    "perturbation_eigenvalue_L",
    "perturbation_eigenvalue_M",
    "read_profile",
    "scan_region",
    "smallest_eigenvalues",
    "solve_wave",
    "stokes_profile",
    "terminal_profile",
    "unperturbed_spectrum",
    "write_profile",
]
