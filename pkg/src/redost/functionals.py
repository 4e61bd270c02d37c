"""Conserved functionals and their Lyapunov combinations on grid functions.

All integrals are over one 2*pi period and are computed as spectral
quadrature (grid mean times 2*pi), which is exact for trigonometric
polynomials below the Nyquist limit.  Fractional-power integrands are
evaluated pointwise; every value carries a ``resolution_defect`` obtained
by re-evaluating on a twice-oversampled grid, which guards against
under-resolution.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.signal import resample

from .core import EquationKind, grid_derivative
from .errors import MeanNonzero, ValidityViolation

__all__ = ["FunctionalValue", "evaluate", "casimir_multiplier", "FUNCTIONAL_NAMES"]

FUNCTIONAL_NAMES = ("Q", "E", "C", "H", "S", "R", "Lambda")

_MEAN_TOL = 1e-10


@dataclass(frozen=True)
class FunctionalValue:
    """One functional evaluated on one grid function."""

    name: str
    value: float
    kind: EquationKind
    resolution_defect: float = 0.0


def casimir_multiplier(kind: EquationKind, gamma: float, invariant: float) -> float:
    """Multiplier of the momentum in the Casimir combination C - Gamma*Q.

    Computed from the profile's own (gamma, invariant) pair; the smooth
    family keeps the radicand strictly positive and it degenerates exactly
    at the terminal wave.
    """
    if kind is EquationKind.RO:
        radicand = gamma**3 - 6.0 * invariant
        if radicand <= 0.0:
            raise ValidityViolation(
                f"gamma^3 - 6I = {radicand:.3e} is not positive", min_value=radicand
            )
        return -radicand ** (-2.0 / 3.0)
    if kind is EquationKind.MRO:
        radicand = gamma**2 - 2.0 * invariant
    else:
        radicand = gamma**2 + 2.0 * invariant
    if radicand <= 0.0:
        raise ValidityViolation(
            f"speed-invariant radicand = {radicand:.3e} is not positive", min_value=radicand
        )
    return -0.5 / math.sqrt(radicand)


def _mean_integral(samples: np.ndarray) -> float:
    return 2.0 * math.pi * float(samples.mean())


def _momentum(u: np.ndarray) -> float:
    return _mean_integral(u * u)


def _energy(kind: EquationKind, u: np.ndarray) -> float:
    anti = grid_derivative(u, -1)
    value = _mean_integral(anti * anti)
    if kind is EquationKind.RO:
        value += _mean_integral(u**3) / 3.0
    elif kind is EquationKind.MRO:
        value += _mean_integral(u**4) / 12.0
    else:
        value -= _mean_integral(u**4) / 12.0
    return value


def _casimir_density(kind: EquationKind, u: np.ndarray) -> np.ndarray:
    if kind is EquationKind.RO:
        arg = 1.0 - 3.0 * grid_derivative(u, 2)
        _require_positive(arg, "1 - 3u''")
        return arg ** (1.0 / 3.0)
    du = grid_derivative(u, 1)
    if kind is EquationKind.MRO:
        arg = 1.0 - du**2
        _require_positive(arg, "1 - (u')^2")
    else:
        arg = 1.0 + du**2
    return np.sqrt(arg)


def _higher_energy_density(kind: EquationKind, u: np.ndarray) -> np.ndarray:
    if kind is EquationKind.RO:
        arg = 1.0 - 3.0 * grid_derivative(u, 2)
        _require_positive(arg, "1 - 3u''")
        return grid_derivative(u, 3) ** 2 / arg ** (7.0 / 3.0)
    du = grid_derivative(u, 1)
    ddu = grid_derivative(u, 2)
    if kind is EquationKind.MRO:
        arg = 1.0 - du**2
        _require_positive(arg, "1 - (u')^2")
    else:
        arg = 1.0 + du**2
    return ddu**2 / arg**2.5


def _require_positive(arg: np.ndarray, label: str) -> None:
    low = float(arg.min())
    if low <= 0.0:
        raise ValidityViolation(f"{label} reaches {low:.3e} on the grid", min_value=low)


def _require_zero_mean(u: np.ndarray) -> None:
    mean = float(u.mean())
    if abs(mean) > _MEAN_TOL * max(1.0, float(np.max(np.abs(u)))):
        raise MeanNonzero(f"grid function has mean {mean:.3e}; the antiderivative "
                          "is defined on the zero-mean subspace only")


def _raw_value(name, kind, u, gamma, c, invariant):
    if name == "Q":
        return _momentum(u)
    if name == "E":
        return _energy(kind, u)
    if name == "C":
        return _mean_integral(_casimir_density(kind, u))
    if name == "H":
        return _mean_integral(_higher_energy_density(kind, u))
    if name == "S":
        return _energy(kind, u) - gamma * _momentum(u)
    if name == "R":
        multiplier = casimir_multiplier(kind, gamma, invariant)
        return _mean_integral(_casimir_density(kind, u)) - multiplier * _momentum(u)
    # Lambda
    s_val = _energy(kind, u) - gamma * _momentum(u)
    multiplier = casimir_multiplier(kind, gamma, invariant)
    r_val = _mean_integral(_casimir_density(kind, u)) - multiplier * _momentum(u)
    return s_val - kind.combination_sign * c * r_val


def evaluate(
    name: str,
    kind: EquationKind,
    grid_function: np.ndarray,
    gamma: float | None = None,
    c: float | None = None,
    invariant: float | None = None,
) -> FunctionalValue:
    """Evaluate a conserved functional or combination on 2m grid samples.

    ``gamma`` is required for S, R and Lambda; ``invariant`` (the profile's
    first integral, which fixes the Casimir multiplier) for R and Lambda;
    ``c`` for Lambda.  Functions needing the zero-mean antiderivative must
    have zero mean; Casimir-type integrands must stay inside the validity
    region, otherwise the evaluation raises instead of returning NaN.
    """
    if name not in FUNCTIONAL_NAMES:
        raise ValueError(f"unknown functional {name!r}; expected one of {FUNCTIONAL_NAMES}")
    u = np.asarray(grid_function, dtype=float)
    if name in ("S", "R", "Lambda") and gamma is None:
        raise ValueError(f"{name} requires gamma")
    if name in ("R", "Lambda") and invariant is None:
        raise ValueError(f"{name} requires the profile invariant")
    if name == "Lambda" and c is None:
        raise ValueError("Lambda requires the speed parameter c")
    if name in ("E", "S", "Lambda"):
        _require_zero_mean(u)
    value = _raw_value(name, kind, u, gamma, c, invariant)
    fine = resample(u, 2 * len(u))
    defect = abs(_raw_value(name, kind, fine, gamma, c, invariant) - value)
    return FunctionalValue(name=name, value=value, kind=kind, resolution_defect=defect)
