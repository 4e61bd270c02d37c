"""Domain types, equation-family dispatch, and Fourier-spectral primitives.

Everything in this package lives on the normalized 2*pi-periodic frame: a
wave profile is an even, zero-mean trigonometric polynomial

    U(z) = sum_{n=1}^{M} A_n cos(n z)

sampled on the 2M evenly spaced collocation points z_j = -pi + j*pi/M,
j = 0..2M-1 (so z = 0 is a grid point, which makes even-symmetry checks
exact).  This module owns the three equation families, the profile
container, the closed-form constants table, and the spectral plumbing
(derivative/antiderivative evaluation, grid <-> coefficient projections,
dense differentiation matrices) that the solver and operator assembly
build on.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

__all__ = [
    "EquationKind",
    "AsymptoticConstants",
    "WaveProfile",
    "SpectralGrid",
    "asymptotic_constants",
    "collocation_points",
    "cosine_series_values",
    "cosine_coeffs_from_grid",
    "differentiation_matrix",
    "grid_derivative",
    "fourier_eval",
    "ode_residual_values",
    "invariant_values",
    "resize_coeffs",
]


class EquationKind(enum.Enum):
    """The three equation families handled by this package.

    RO is the quadratic reduced Ostrovsky equation, MRO the cubic
    defocusing variant, SP the cubic focusing short-pulse equation.  A
    travelling wave of each satisfies

        d/dz[(gamma - N(U)) U'] + U = 0

    with nonlinearity N(U) = U, U^2/2, -U^2/2 respectively.
    """

    RO = "ro"
    MRO = "mro"
    SP = "sp"

    @classmethod
    def parse(cls, label: str) -> "EquationKind":
        try:
            return cls(label.lower())
        except ValueError:
            raise ValueError(f"unknown equation kind {label!r}; expected ro, mro or sp") from None

    @property
    def combination_sign(self) -> int:
        """+1 when the stability operator is L - c*M, -1 when it is L + c*M."""
        return -1 if self is EquationKind.SP else 1

    @property
    def terminal_amplitude(self) -> float | None:
        """Largest |a| in the smooth family, or None when unconstrained (SP)."""
        if self is EquationKind.RO:
            return 2.0 / 3.0
        if self is EquationKind.MRO:
            return 4.0 / math.pi
        return None

    @property
    def gamma_limit(self) -> float | None:
        """Upper end of the smooth-family speed interval (1, gamma_limit)."""
        if self is EquationKind.RO:
            return math.pi**2 / 9.0
        if self is EquationKind.MRO:
            return math.pi**2 / 8.0
        return None

    def nonlinearity(self, u):
        """N(U) in the travelling-wave equation d/dz[(gamma - N(U)) U'] + U = 0."""
        if self is EquationKind.RO:
            return u
        if self is EquationKind.MRO:
            return 0.5 * u * u
        return -0.5 * u * u

    def nonlinearity_prime(self, u):
        if self is EquationKind.RO:
            return np.ones_like(u)
        if self is EquationKind.MRO:
            return u
        return -u

    def nonlinearity_second(self, u):
        if self is EquationKind.RO:
            return 0.0
        if self is EquationKind.MRO:
            return 1.0
        return -1.0

    def potential(self, u):
        """Antiderivative of u*N(u); the potential term of the first integral."""
        if self is EquationKind.RO:
            return u**3 / 3.0
        if self is EquationKind.MRO:
            return u**4 / 8.0
        return -(u**4) / 8.0


@dataclass(frozen=True)
class AsymptoticConstants:
    """Small-amplitude constants for one equation family.

    All entries are exact rationals/radicals evaluated in double precision.
    ``stokes_coeffs`` maps harmonic number n to the coefficient of a**n in
    the Stokes expansion of that harmonic (the fundamental itself is
    normalized to a).  ``split_rate_energy``/``split_rate_casimir`` are the
    a^2-rates at which the even member of the doubly degenerate zero
    eigenvalue moves under the energy Hessian alone and under the
    Casimir-functional Hessian alone; the combined rate for the Lyapunov
    Hessian at speed parameter c follows by superposition.
    """

    kind: EquationKind
    c0: float
    band_curvature0: float
    mode_coupling: float
    split_rate_energy: float
    split_rate_casimir: float
    stokes_coeffs: tuple[tuple[int, float], ...]
    gamma_a2: float
    invariant_a2: float
    boundary_slope: float | None

    def split_rate(self, c: float) -> float:
        """a^2-rate of the even near-zero eigenvalue of the combined Hessian."""
        return self.split_rate_energy - self.kind.combination_sign * c * self.split_rate_casimir

    @property
    def split_rate_c0(self) -> float:
        return self.split_rate(self.c0)


_CONSTANTS = {
    EquationKind.RO: AsymptoticConstants(
        kind=EquationKind.RO,
        c0=0.5,
        band_curvature0=12.0,
        mode_coupling=4.0,
        split_rate_energy=1.0 / 3.0,
        split_rate_casimir=-10.0 / 3.0,
        stokes_coeffs=((2, 1.0 / 3.0), (3, 3.0 / 16.0)),
        gamma_a2=1.0 / 6.0,
        invariant_a2=0.5,
        boundary_slope=math.sqrt(3.0) / 2.0,
    ),
    EquationKind.MRO: AsymptoticConstants(
        kind=EquationKind.MRO,
        c0=2.0,
        band_curvature0=8.0,
        mode_coupling=1.0,
        split_rate_energy=0.25,
        split_rate_casimir=-0.375,
        stokes_coeffs=((3, 3.0 / 64.0),),
        gamma_a2=0.125,
        invariant_a2=0.5,
        boundary_slope=2.0,
    ),
    EquationKind.SP: AsymptoticConstants(
        kind=EquationKind.SP,
        c0=2.0,
        band_curvature0=8.0,
        mode_coupling=1.0,
        split_rate_energy=-0.25,
        split_rate_casimir=-0.375,
        # Seed-quality only: the cubic harmonic flips sign relative to the
        # defocusing family because the map between them sends a^2 -> -a^2.
        stokes_coeffs=((3, -3.0 / 64.0),),
        gamma_a2=-0.125,
        invariant_a2=0.5,
        boundary_slope=None,
    ),
}


def asymptotic_constants(kind: EquationKind) -> AsymptoticConstants:
    """Closed-form small-amplitude constants table for the given family."""
    return _CONSTANTS[kind]


# ---------------------------------------------------------------------------
# Spectral grid and transforms
# ---------------------------------------------------------------------------


@lru_cache(maxsize=8)
def collocation_points(m: int) -> np.ndarray:
    """The 2m evenly spaced points z_j = -pi + j*pi/m of [-pi, pi)."""
    z = -np.pi + (np.pi / m) * np.arange(2 * m)
    z.setflags(write=False)
    return z


@lru_cache(maxsize=4)
def _trig_tables(m: int) -> tuple[np.ndarray, np.ndarray]:
    # cos(n z_j) and sin(n z_j) for n = 1..m on the 2m-point grid
    z = collocation_points(m)
    n = np.arange(1, m + 1)
    arg = np.outer(n, z)
    cos_t = np.cos(arg)
    sin_t = np.sin(arg)
    cos_t.setflags(write=False)
    sin_t.setflags(write=False)
    return cos_t, sin_t


def cosine_series_values(coeffs: np.ndarray, order: int = 0) -> np.ndarray:
    """Evaluate d^order/dz^order of sum A_n cos(nz) on the collocation grid.

    Negative orders are the zero-mean antiderivatives, which are well
    defined because the series has no constant term.
    """
    coeffs = np.asarray(coeffs, dtype=float)
    m = coeffs.shape[0]
    n = np.arange(1, m + 1, dtype=float)
    weights = coeffs * n**order
    cos_t, sin_t = _trig_tables(m)
    phase = order % 4
    if phase == 0:
        return weights @ cos_t
    if phase == 1:
        return -(weights @ sin_t)
    if phase == 2:
        return -(weights @ cos_t)
    return weights @ sin_t


def cosine_coeffs_from_grid(values: np.ndarray) -> tuple[np.ndarray, float]:
    """Project 2m grid samples onto the even zero-mean cosine basis.

    Returns ``(coeffs, leftover)`` where ``leftover`` is the largest
    discarded content (constant term or any sine coefficient): for data
    that is structurally even and zero-mean it sits at round-off level and
    is a useful health indicator.
    """
    values = np.asarray(values, dtype=float)
    n2 = values.shape[0]
    if n2 % 2:
        raise ValueError("grid length must be even")
    m = n2 // 2
    spec = np.fft.rfft(values)
    signs = np.where(np.arange(m + 1) % 2 == 0, 1.0, -1.0)
    coeffs = signs[1:] * spec.real[1:] / m
    coeffs[-1] *= 0.5  # Nyquist mode has no conjugate partner
    mean = spec.real[0] / n2
    sine = np.abs(spec.imag[1:m]) / m
    leftover = max(abs(mean), float(sine.max(initial=0.0)))
    return coeffs, leftover


@lru_cache(maxsize=8)
def differentiation_matrix(m: int, order: int) -> np.ndarray:
    """Dense 2m x 2m spectral differentiation matrix on the periodic grid.

    Odd orders null the Nyquist mode (the standard real convention) and
    negative orders project out the mean, so every returned matrix maps
    real grid data to real grid data.
    """
    n2 = 2 * m
    spec = np.fft.rfft(np.eye(n2), axis=0)
    p = np.arange(m + 1, dtype=float)
    sym = np.zeros(m + 1, dtype=complex)
    if order >= 0:
        sym[:] = (1j * p) ** order
    else:
        sym[1:] = (1j * p[1:]) ** order
    if order % 2:
        sym[m] = 0.0
    mat = np.fft.irfft(sym[:, None] * spec, n=n2, axis=0)
    mat.setflags(write=False)
    return mat


def grid_derivative(values: np.ndarray, order: int) -> np.ndarray:
    """Spectral derivative (or zero-mean antiderivative) of grid samples."""
    values = np.asarray(values, dtype=float)
    n2 = values.shape[0]
    m = n2 // 2
    spec = np.fft.rfft(values)
    p = np.arange(m + 1, dtype=float)
    sym = np.zeros(m + 1, dtype=complex)
    if order >= 0:
        sym[:] = (1j * p) ** order
    else:
        sym[1:] = (1j * p[1:]) ** order
    if order % 2:
        sym[m] = 0.0
    return np.fft.irfft(sym * spec, n=n2)


def resize_coeffs(coeffs: np.ndarray, m: int) -> np.ndarray:
    """Pad with zeros or truncate a cosine-coefficient vector to length m."""
    out = np.zeros(m)
    k = min(m, len(coeffs))
    out[:k] = coeffs[:k]
    return out


# ---------------------------------------------------------------------------
# Profile container
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class WaveProfile:
    """An even, zero-mean periodic wave in cosine representation.

    ``coeffs`` holds A_1..A_M; the normalization A_1 = a is preserved by the
    solver.  ``invariant`` is the grid average of the pointwise first
    integral and ``invariant_deviation`` its maximal pointwise departure
    from that average, which measures how well the profile solves the
    travelling-wave equation independently of the Newton residual.
    """

    kind: EquationKind
    a: float
    gamma: float
    coeffs: np.ndarray
    invariant: float
    invariant_deviation: float
    ode_residual: float
    iterations: int = 0

    def __post_init__(self):
        coeffs = np.array(self.coeffs, dtype=float)
        coeffs.setflags(write=False)
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def m(self) -> int:
        return len(self.coeffs)

    @property
    def collocation_size(self) -> int:
        return 2 * self.m

    def grid(self) -> np.ndarray:
        return collocation_points(self.m)

    def values(self, order: int = 0) -> np.ndarray:
        return fourier_eval(self, order)


def fourier_eval(profile: WaveProfile, derivative_order: int = 0) -> np.ndarray:
    """Grid values of d^order/dz^order of the profile, orders -2..4."""
    if not -2 <= derivative_order <= 4:
        raise ValueError("derivative_order must lie in -2..4")
    return cosine_series_values(profile.coeffs, derivative_order)


@dataclass(frozen=True)
class SpectralGrid:
    """Shifted-wavenumber bookkeeping for one Bloch quasi-momentum.

    At kappa = 0 the n = 0 mode is excluded (zero-mean subspace), so all
    shifted wavenumbers kappa + n are nonzero.
    """

    m: int
    kappa: float = 0.0

    def __post_init__(self):
        if not -0.5 <= self.kappa <= 0.5:
            raise ValueError("kappa must lie in the Brillouin zone [-1/2, 1/2]")

    @property
    def zero_mode_removed(self) -> bool:
        return self.kappa == 0.0

    def modes(self) -> np.ndarray:
        n = np.arange(-self.m, self.m)
        if self.zero_mode_removed:
            n = n[n != 0]
        return n

    def shifted_wavenumbers(self) -> np.ndarray:
        return self.kappa + self.modes()

    @property
    def dimension(self) -> int:
        return 2 * self.m - 1 if self.zero_mode_removed else 2 * self.m


# ---------------------------------------------------------------------------
# Equation-family pointwise evaluations shared by solver and asymptotics
# ---------------------------------------------------------------------------


def ode_residual_values(kind: EquationKind, gamma: float, coeffs: np.ndarray) -> np.ndarray:
    """Pointwise residual (gamma - N(U)) U'' - N'(U) (U')^2 + U on the grid."""
    u = cosine_series_values(coeffs, 0)
    du = cosine_series_values(coeffs, 1)
    ddu = cosine_series_values(coeffs, 2)
    return (gamma - kind.nonlinearity(u)) * ddu - kind.nonlinearity_prime(u) * du**2 + u


def invariant_values(kind: EquationKind, gamma: float, coeffs: np.ndarray) -> np.ndarray:
    """Pointwise samples of the first integral of the travelling-wave ODE.

    Constant along exact solutions; its grid spread is the solver's
    independent accuracy check.
    """
    u = cosine_series_values(coeffs, 0)
    du = cosine_series_values(coeffs, 1)
    return (
        0.5 * (gamma - kind.nonlinearity(u)) ** 2 * du**2
        + 0.5 * gamma * u**2
        - kind.potential(u)
    )
