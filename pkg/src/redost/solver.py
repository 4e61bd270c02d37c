"""Newton-Kantorovich solver for periodic travelling-wave profiles.

The collocated travelling-wave equation is solved for the grid values of
the profile and the speed parameter gamma simultaneously: one bordered
dense linear system of size 2M+1 per iteration, whose last row enforces
orthogonality of the increment to cos(z) so the amplitude normalization
A_1 = a survives the iteration.  Each increment is projected back onto the
even zero-mean cosine subspace, which is the structural representation of
the profile.
"""

from __future__ import annotations

import numpy as np
from scipy import linalg

from .asymptotics import stokes_profile
from .core import (
    EquationKind,
    WaveProfile,
    collocation_points,
    cosine_coeffs_from_grid,
    cosine_series_values,
    differentiation_matrix,
    invariant_values,
    ode_residual_values,
    resize_coeffs,
)
from .errors import AliasingFailure, NoConvergence, RangeViolation

__all__ = ["solve_wave", "continue_family", "compute_invariant"]

TERMINAL_GUARD = 0.999
ALIASING_TOL = 1e-14


def _zero_profile(kind: EquationKind, m: int) -> WaveProfile:
    return WaveProfile(
        kind=kind,
        a=0.0,
        gamma=1.0,
        coeffs=np.zeros(m),
        invariant=0.0,
        invariant_deviation=0.0,
        ode_residual=0.0,
        iterations=0,
    )


def _check_validity(kind: EquationKind, gamma: float, coeffs: np.ndarray) -> None:
    u = cosine_series_values(coeffs, 0)
    margin = np.min(gamma - kind.nonlinearity(u))
    if margin <= 0.0:
        raise RangeViolation(
            f"wave-speed coefficient gamma - N(U) reaches {margin:.3e}; "
            "the profile left the validity region"
        )
    if kind is EquationKind.RO:
        ddu = cosine_series_values(coeffs, 2)
        margin = np.min(1.0 - 3.0 * ddu)
        if margin <= 0.0:
            raise RangeViolation(f"1 - 3U'' reaches {margin:.3e}; smooth family exhausted")
    elif kind is EquationKind.MRO:
        du = cosine_series_values(coeffs, 1)
        margin = np.min(1.0 - du**2)
        if margin <= 0.0:
            raise RangeViolation(f"1 - (U')^2 reaches {margin:.3e}; smooth family exhausted")


def _check_aliasing(coeffs: np.ndarray) -> None:
    m = len(coeffs)
    tail = np.abs(coeffs[m // 4 :])
    if tail.size and tail.max() >= ALIASING_TOL:
        n_bad = m // 4 + int(np.argmax(tail >= ALIASING_TOL)) + 1
        raise AliasingFailure(
            f"|A_{n_bad}| = {tail.max():.3e} >= {ALIASING_TOL:g} beyond mode M/4; "
            "increase the mode count M"
        )


def solve_wave(
    kind: EquationKind,
    a: float,
    m: int,
    tol: float = 1e-15,
    max_iter: int = 25,
    initial: WaveProfile | None = None,
) -> WaveProfile:
    """Solve for the even periodic wave with fundamental amplitude a.

    ``m`` is the cosine-mode truncation (power of two, >= 16; the grid has
    2m points).  Iterates until the max-norm of the Newton increment drops
    below ``tol``.  ``initial`` warm-starts the iteration (its fundamental
    coefficient is overwritten by a); by default the truncated Stokes
    expansion seeds it.
    """
    if m < 16 or (m & (m - 1)) != 0:
        raise ValueError("m must be a power of two >= 16")
    if tol <= 0.0:
        raise ValueError("tol must be positive")
    terminal = kind.terminal_amplitude
    if terminal is not None and abs(a) >= TERMINAL_GUARD * terminal:
        raise RangeViolation(
            f"|a| = {abs(a):.4f} is at or beyond {TERMINAL_GUARD:g} x terminal "
            f"amplitude {terminal:.4f}; the non-smooth limit is not attempted"
        )
    if a == 0.0:
        return _zero_profile(kind, m)

    if initial is None:
        initial = stokes_profile(kind, a, m)
    coeffs = resize_coeffs(initial.coeffs, m)
    coeffs[0] = a
    gamma = float(initial.gamma)

    z = collocation_points(m)
    cos_z = np.cos(z)
    d1 = differentiation_matrix(m, 1)
    d2 = differentiation_matrix(m, 2)
    n2 = 2 * m

    system = np.empty((n2 + 1, n2 + 1))
    rhs = np.empty(n2 + 1)
    iterations = 0
    increment = np.inf
    for iterations in range(1, max_iter + 1):
        u = cosine_series_values(coeffs, 0)
        du = cosine_series_values(coeffs, 1)
        ddu = cosine_series_values(coeffs, 2)
        coef = gamma - kind.nonlinearity(u)
        if np.min(coef) <= 0.0:
            raise RangeViolation(
                f"iteration {iterations}: gamma - N(U) reached {np.min(coef):.3e}"
            )
        nprime = kind.nonlinearity_prime(u)
        residual = coef * ddu - nprime * du**2 + u

        system[:n2, :n2] = coef[:, None] * d2
        system[:n2, :n2] -= (2.0 * nprime * du)[:, None] * d1
        diag = 1.0 - nprime * ddu - kind.nonlinearity_second(u) * du**2
        system[:n2, :n2] += np.diag(diag)
        # The linearization annihilates the translation mode U' (odd), which
        # makes the bordered matrix numerically singular while the right-hand
        # side is even.  Deflating that known odd kernel leaves the even
        # subsystem untouched (parity decouples) and keeps the solve clean.
        norm_du = np.linalg.norm(du)
        if norm_du > 0.0:
            w = du / norm_du
            system[:n2, :n2] += np.outer(w, w)
        system[:n2, n2] = ddu
        system[n2, :n2] = cos_z
        system[n2, n2] = 0.0
        rhs[:n2] = -residual
        rhs[n2] = 0.0

        sol = linalg.solve(system, rhs)
        v = sol[:n2]
        g = sol[n2]
        increment = max(float(np.max(np.abs(v))), abs(float(g)))

        dcoeffs, _ = cosine_coeffs_from_grid(v)
        dcoeffs[0] = 0.0  # the bordered row keeps A_1 = a; pin it exactly
        coeffs = coeffs + dcoeffs
        gamma += float(g)
        if increment < tol:
            break
    else:
        raise NoConvergence(
            f"no convergence after {max_iter} iterations "
            f"(last increment {increment:.3e})",
            last_increment=increment,
            iterations=max_iter,
        )

    _check_validity(kind, gamma, coeffs)
    _check_aliasing(coeffs)
    inv = invariant_values(kind, gamma, coeffs)
    res = ode_residual_values(kind, gamma, coeffs)
    mean = float(inv.mean())
    return WaveProfile(
        kind=kind,
        a=a,
        gamma=gamma,
        coeffs=coeffs,
        invariant=mean,
        invariant_deviation=float(np.max(np.abs(inv - mean))),
        ode_residual=float(np.max(np.abs(res))),
        iterations=iterations,
    )


def continue_family(
    kind: EquationKind,
    a_values,
    m: int,
    tol: float = 1e-15,
) -> list[WaveProfile]:
    """Solve a monotone amplitude ladder, warm-starting each rung.

    On failure the raised solver error is annotated with the partial list of
    converged profiles (``partial_profiles``), the failing index
    (``failed_index``) and amplitude (``failed_amplitude``).
    """
    a_values = list(a_values)
    if not a_values:
        return []
    diffs = np.diff(a_values)
    if len(a_values) > 1 and not (np.all(diffs > 0) or np.all(diffs < 0)):
        raise ValueError("a_values must be strictly monotone")
    if abs(a_values[0]) > 0.1:
        raise ValueError("continuation must start at |a| <= 0.1")
    profiles: list[WaveProfile] = []
    previous: WaveProfile | None = None
    for index, a in enumerate(a_values):
        try:
            previous = solve_wave(kind, a, m, tol=tol, initial=previous)
        except Exception as exc:
            exc.partial_profiles = profiles
            exc.failed_index = index
            exc.failed_amplitude = a
            raise
        profiles.append(previous)
    return profiles


def compute_invariant(profile: WaveProfile) -> tuple[float, float]:
    """Grid average of the first integral and its maximal pointwise spread."""
    inv = invariant_values(profile.kind, profile.gamma, profile.coeffs)
    mean = float(inv.mean())
    return mean, float(np.max(np.abs(inv - mean)))
