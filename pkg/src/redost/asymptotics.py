"""Closed-form small-amplitude and terminal-wave formulas.

This module is the oracle layer: Stokes expansions, dispersion relations
and their factorized forms at the balance speed, the positivity-boundary
slopes, the terminal (non-smooth) profiles, and the zero-amplitude spectra
of the two Hessian operators.  Everything here is analytic; the numerical
modules are validated against it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .core import (
    AsymptoticConstants,
    EquationKind,
    WaveProfile,
    asymptotic_constants,
    invariant_values,
    ode_residual_values,
)
from .errors import UnsupportedEquation

__all__ = [
    "stokes_profile",
    "dispersion",
    "dispersion_factorized",
    "c_pm",
    "terminal_profile",
    "unperturbed_spectrum",
    "SpectrumSummary",
]


def _profile_from_coeffs(kind, a, gamma, coeffs, iterations=0):
    inv = invariant_values(kind, gamma, coeffs)
    res = ode_residual_values(kind, gamma, coeffs)
    mean = inv.mean()
    return WaveProfile(
        kind=kind,
        a=a,
        gamma=gamma,
        coeffs=coeffs,
        invariant=float(mean),
        invariant_deviation=float(np.max(np.abs(inv - mean))),
        ode_residual=float(np.max(np.abs(res))),
        iterations=iterations,
    )


def stokes_profile(kind: EquationKind, a: float, m: int = 64) -> WaveProfile:
    """Truncated Stokes expansion of the small-amplitude wave.

    Coefficients through cubic order and gamma through quadratic order;
    beyond |a| ~ 0.3 this is only useful as a Newton seed.  The stored
    invariant and residual are evaluated from the truncated coefficients,
    so they expose the O(a^4) truncation error honestly.
    """
    table = asymptotic_constants(kind)
    coeffs = np.zeros(m)
    coeffs[0] = a
    for n, cn in table.stokes_coeffs:
        if n <= m:
            coeffs[n - 1] = cn * a**n
    gamma = 1.0 + table.gamma_a2 * a * a
    return _profile_from_coeffs(kind, a, gamma, coeffs)


def dispersion(kind: EquationKind, c: float, k) -> np.ndarray:
    """Zero-amplitude symbol of the Lyapunov Hessian at wavenumber k.

    Nonnegativity of this symbol for all real k is exactly the positivity
    of the Hessian at zero amplitude; it holds only at c = c0.
    """
    k = np.asarray(k, dtype=float)
    if np.any(k == 0.0):
        raise ValueError("dispersion is undefined at k = 0 (zero-mean subspace)")
    if kind is EquationKind.RO:
        return c * k**4 - (1.0 + c) + k**-2.0
    # The cubic families share one symbol: the sign flips of the focusing
    # variant cancel in the combination.
    return 0.5 * c * k**2 - 1.0 - 0.5 * c + k**-2.0


def dispersion_factorized(kind: EquationKind, k) -> np.ndarray:
    """Factorized form of the symbol, valid only at c = c0."""
    k = np.asarray(k, dtype=float)
    if np.any(k == 0.0):
        raise ValueError("dispersion is undefined at k = 0 (zero-mean subspace)")
    if kind is EquationKind.RO:
        return (1.0 - k**2) ** 2 * (2.0 + k**2) / (2.0 * k**2)
    return (1.0 - k**2) ** 2 / k**2


def c_pm(kind: EquationKind, a: float) -> tuple[float, float]:
    """Leading-order positivity boundaries c0 -/+ slope*|a|.

    The slope is evaluated from the general small-amplitude formula
    sqrt(split_rate(c0) * band_curvature0) / (sqrt(2) * mode_coupling) and
    cross-checked against the family's closed-form constant.
    """
    table = asymptotic_constants(kind)
    if table.boundary_slope is None:
        raise UnsupportedEquation(
            "no positivity interval exists for the focusing short-pulse family"
        )
    slope = math.sqrt(table.split_rate_c0 * table.band_curvature0) / (
        math.sqrt(2.0) * table.mode_coupling
    )
    if not math.isclose(slope, table.boundary_slope, rel_tol=1e-14):
        raise AssertionError(
            f"general boundary-slope formula {slope!r} disagrees with the "
            f"closed-form constant {table.boundary_slope!r}"
        )
    return table.c0 - slope * abs(a), table.c0 + slope * abs(a)


def terminal_profile(kind: EquationKind, m: int = 1024) -> WaveProfile:
    """Fourier representation of the terminal (limiting, non-smooth) wave.

    The quadratic family ends on a piecewise-parabolic wave with closed-form
    coefficients; the cubic defocusing family ends on a piecewise-linear
    wave whose coefficients are obtained by direct quadrature.  The stored
    gamma and invariant are the exact terminal values; the residual and
    invariant spread reflect the Gibbs error of truncating a non-smooth
    profile and are not small.
    """
    n = np.arange(1, m + 1)
    if kind is EquationKind.RO:
        coeffs = 2.0 * (-1.0) ** n / (3.0 * n**2)
        gamma = math.pi**2 / 9.0
        invariant = math.pi**6 / 4374.0
    elif kind is EquationKind.MRO:
        coeffs = np.empty(m)
        for i, ni in enumerate(n):
            # (1/pi) * integral of (|z| - pi/2) cos(n z) over one period
            val, _ = quad(lambda z, ni=ni: (z - math.pi / 2.0) * math.cos(ni * z), 0.0, math.pi)
            coeffs[i] = 2.0 * val / math.pi
        gamma = math.pi**2 / 8.0
        invariant = math.pi**4 / 128.0
    else:
        raise UnsupportedEquation("the short-pulse family has no terminal amplitude")
    inv = invariant_values(kind, gamma, coeffs)
    res = ode_residual_values(kind, gamma, coeffs)
    return WaveProfile(
        kind=kind,
        a=float(coeffs[0]),
        gamma=gamma,
        coeffs=coeffs,
        invariant=invariant,
        invariant_deviation=float(np.max(np.abs(inv - inv.mean()))),
        ode_residual=float(np.max(np.abs(res))),
    )


@dataclass(frozen=True)
class SpectrumSummary:
    """Zero-amplitude spectrum of one Hessian operator with split counts.

    ``values`` lists the double eigenvalues with multiplicity (descending).
    The counts describe the spectrum for small nonzero amplitude: one
    member of the zero pair stays at zero (translation mode) while the
    other moves in the direction of the family's split rate.
    """

    values: np.ndarray
    positive: int
    zero: int
    negative: int


def unperturbed_spectrum(
    kind: EquationKind,
    operator_name: str,
    period_multiple: int = 1,
    cutoff: int = 20,
) -> SpectrumSummary:
    """Closed-form spectrum of L or M at zero amplitude on the 2*pi*N torus.

    ``operator_name`` is "L" (energy Hessian) or "M" (Casimir Hessian);
    ``period_multiple`` is the subharmonic period multiple N.
    """
    if period_multiple < 1:
        raise ValueError("period_multiple must be a positive integer")
    table = asymptotic_constants(kind)
    n = np.arange(1, cutoff + 1, dtype=float)
    ratio = n / period_multiple
    if operator_name == "L":
        singles = -1.0 + ratio**-2.0
        split = table.split_rate_energy
    elif operator_name == "M":
        if kind is EquationKind.RO:
            singles = 1.0 - ratio**4
        elif kind is EquationKind.MRO:
            singles = 0.5 * (1.0 - ratio**2)
        else:
            singles = 0.5 * (ratio**2 - 1.0)
        split = table.split_rate_casimir
    else:
        raise ValueError("operator_name must be 'L' or 'M'")
    values = np.sort(np.repeat(singles, 2))[::-1]
    positive = int(np.sum(values > 0.0))
    negative = int(np.sum(values < 0.0))
    # The double zero at n = N splits for small a: one member stays zero
    # (translation), the other follows the sign of the split rate.
    if split > 0:
        positive += 1
    else:
        negative += 1
    return SpectrumSummary(values=values, positive=positive, zero=1, negative=negative)
