"""Positivity boundaries c_-(a) < c_+(a) of the Lyapunov Hessian.

Two routes locate the interval of speed parameters c on which the pencil
P(kappa) is positive for every quasi-momentum:

* the generalized eigenvalue problem A(dk) w = c B(dk) w at a small probe
  quasi-momentum dk, whose real eigenvalues nearest a positive-definite
  reference speed are the points where the ground-band curvature flips;
* direct verification (``check_positive``), the oracle the first route is
  cross-checked against.

At small amplitude the curvature flip is the first loss of positivity and
the two routes agree.  At large amplitude the first negative eigenvalue
moves to quasi-momenta of order 0.1-0.5, where the small-dk pencil is
blind, and the interval drifts away from c0; the region scan therefore
verifies every pencil answer directly and falls back to bisection on the
direct check when the pencil misses.
"""

from __future__ import annotations

import logging
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy import linalg

from .core import EquationKind, WaveProfile, asymptotic_constants
from .errors import ComplexPencil, EigensolverFailure, NoPositiveReference, RedostError
from .operators import BlochOperator, assemble, smallest_eigenvalues, translation_vector
from .solver import solve_wave

__all__ = [
    "PositivityCheck",
    "PositivityBoundary",
    "find_c_boundaries",
    "check_positive",
    "scan_region",
    "default_verification_grid",
]

log = logging.getLogger(__name__)

_IMAG_TOL = 1e-8
_ZERO_BAND = 1e-8
_DEFLATION_SHIFT = 10.0


@dataclass(frozen=True)
class PositivityCheck:
    """Result of directly checking P(kappa) > 0 over a kappa grid."""

    is_positive: bool
    min_lambda: float
    argmin_kappa: float


@dataclass(frozen=True)
class PositivityBoundary:
    """Sampled positivity interval per amplitude.

    ``verified`` marks amplitudes whose midpoint speed passed the direct
    check; ``method`` records whether the boundaries came from the
    generalized eigenvalue problem or from bisection on the direct check;
    ``errors`` carries per-amplitude failure messages (empty string when
    the amplitude succeeded).
    """

    kind: EquationKind
    a_values: np.ndarray
    c_minus: np.ndarray
    c_plus: np.ndarray
    delta_kappa: float
    verified: np.ndarray
    midpoint_min_lambda: np.ndarray
    method: tuple[str, ...]
    errors: tuple[str, ...]

    def __post_init__(self):
        for field in ("a_values", "c_minus", "c_plus", "verified", "midpoint_min_lambda"):
            getattr(self, field).setflags(write=False)


def default_verification_grid() -> np.ndarray:
    """Coarse half-zone grid used to cross-verify boundaries directly."""
    return np.array([0.0, 0.005, 0.02, 0.05, 0.1, 0.15, 0.2, 0.3, 0.4, 0.5])


def _deflated_pencil(op: BlochOperator, profile: WaveProfile, c: float) -> np.ndarray:
    """Pencil at speed c with the kappa = 0 translation zero shifted away.

    The translation mode is an exact zero of P(0) for every c; shifting it
    by a positive rank-one term implements "excluding the translation
    zero" without disturbing the rest of the spectrum.
    """
    pencil = op.combination(c)
    if op.kappa == 0.0 and profile.a != 0.0:
        mode = translation_vector(profile, op.modes)
        shift = _DEFLATION_SHIFT * (1.0 + abs(c))
        outer = np.outer(mode, mode.conj())
        if not np.iscomplexobj(pencil):
            outer = outer.real
        pencil = pencil + shift * outer
    return pencil


def _is_positive_definite(op, profile, c) -> bool:
    pencil = _deflated_pencil(op, profile, c)
    try:
        linalg.cholesky(pencil, lower=True, check_finite=False)
        return True
    except linalg.LinAlgError:
        return False


def check_positive(profile: WaveProfile, c: float, kappa_grid) -> PositivityCheck:
    """Minimum pencil eigenvalue over a kappa grid, translation zero excluded.

    At kappa = 0 the exact translation zero is deflated (for the zero
    profile, eigenvalues within +-1e-8 of zero are dropped instead).  The
    returned minimum is over everything else; positivity means it is
    strictly positive.
    """
    kappa_grid = np.asarray(kappa_grid, dtype=float)
    best = math.inf
    best_kappa = float(kappa_grid[0])
    for kappa in kappa_grid:
        op = assemble(profile, float(kappa))
        if kappa == 0.0 and profile.a == 0.0:
            vals, _ = smallest_eigenvalues(op, c, min(4, op.dimension))
            vals = vals[np.abs(vals) > _ZERO_BAND]
            if vals.size == 0:
                continue
            low = float(vals[0])
        else:
            low = _deflated_min_eig(op, profile, c)
        if low < best:
            best = low
            best_kappa = float(kappa)
    return PositivityCheck(is_positive=best > 0.0, min_lambda=best, argmin_kappa=best_kappa)


def find_c_boundaries(
    profile: WaveProfile,
    delta_kappa: float,
    c_ref: float | None = None,
) -> tuple[float, float]:
    """Positivity boundaries from the generalized eigenvalue problem.

    Solves A(dk) w = c B(dk) w on the (indefinite) Hermitian pencil and
    returns the real eigenvalues nearest below and above ``c_ref`` (the
    balance speed c0 by default), at which the pencil P(dk) turns
    singular.  ``c_ref`` must give a positive-definite P(dk), otherwise
    NoPositiveReference is raised; non-real eigenvalues interfering with
    the selected bracket raise ComplexPencil instead of being dropped.
    """
    if delta_kappa <= 0.0:
        raise ValueError("delta_kappa must be positive")
    kind = profile.kind
    if c_ref is None:
        c_ref = asymptotic_constants(kind).c0
    op = assemble(profile, delta_kappa)
    vals, _ = smallest_eigenvalues(op, c_ref, 1)
    if vals[0] <= 0.0:
        raise NoPositiveReference(
            f"pencil at probe quasi-momentum {delta_kappa:g} is not positive "
            f"definite at reference speed {c_ref:g} "
            f"(smallest eigenvalue {vals[0]:.3e})",
            min_eigenvalue=float(vals[0]),
        )
    sign = kind.combination_sign
    try:
        spectrum = linalg.eig(op.a_hat, sign * op.b_hat, right=False)
    except linalg.LinAlgError as exc:
        raise EigensolverFailure(f"pencil eigensolve failed: {exc}") from exc
    finite = spectrum[np.isfinite(spectrum)]
    real_mask = np.abs(finite.imag) <= _IMAG_TOL * np.abs(finite)
    reals = np.sort(finite[real_mask].real)
    complexes = finite[~real_mask]
    if complexes.size:
        log.debug("pencil produced %d non-real eigenvalues", complexes.size)
    below = reals[reals < c_ref]
    above = reals[reals > c_ref]
    if below.size == 0 or above.size == 0:
        raise EigensolverFailure(
            f"no real pencil eigenvalues bracket the reference speed {c_ref:g}"
        )
    c_minus = float(below[-1])
    c_plus = float(above[0])
    inside = complexes[(complexes.real > c_minus) & (complexes.real < c_plus)]
    if inside.size:
        worst = inside[np.argmax(np.abs(inside.imag))]
        raise ComplexPencil(
            f"non-real pencil eigenvalue {worst:.6g} lies inside the selected "
            f"bracket ({c_minus:.6g}, {c_plus:.6g})"
        )
    return c_minus, c_plus


def _bisect_boundary(
    ops: list[BlochOperator],
    profile: WaveProfile,
    c_inside: float,
    direction: int,
    tol: float,
) -> float:
    """Bisection on the Cholesky positivity test from a verified inside point."""

    def positive(c: float) -> bool:
        return all(_is_positive_definite(op, profile, c) for op in ops)

    step = max(0.05 * abs(c_inside), 0.01)
    good = c_inside
    bad = None
    for _ in range(60):
        candidate = good + direction * step
        if direction < 0 and candidate <= tol:
            candidate = 0.5 * good
            if candidate <= tol:
                bad = candidate
                break
        if positive(candidate):
            good = candidate
            step *= 2.0
        else:
            bad = candidate
            break
    if bad is None:
        raise EigensolverFailure(
            f"no loss of positivity found in direction {direction:+d} from c={c_inside:g}"
        )
    lo, hi = (good, bad) if direction > 0 else (bad, good)
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if positive(mid) == (direction > 0):
            # for the upper boundary, positive(mid) means mid is still inside
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _find_inside_point(ops, profile, c_ref) -> float | None:
    for factor in (1.0, 0.85, 1.15, 0.7, 1.3, 0.55, 0.4, 1.6, 0.25, 0.15, 0.08):
        candidate = c_ref * factor
        if candidate <= 0.0:
            continue
        if all(_is_positive_definite(op, profile, candidate) for op in ops):
            return candidate
    return None


def _jobs_from_env(jobs: int | None) -> int:
    if jobs is not None:
        return max(1, jobs)
    env = os.environ.get("OSTROVSKY_JOBS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            log.warning("ignoring malformed OSTROVSKY_JOBS=%r", env)
    return os.cpu_count() or 1


def scan_region(
    kind: EquationKind,
    a_grid,
    delta_kappa: float,
    m: int,
    jobs: int | None = None,
    tol: float = 1e-15,
    bisect_tol: float = 5e-4,
) -> PositivityBoundary:
    """Trace the positivity interval along an amplitude ladder.

    Profiles are continued rung to rung; the reference speed is tracked as
    the previous rung's midpoint because the interval drifts away from the
    balance speed at large amplitude.  Each rung tries the generalized
    eigenvalue route first and falls back to bisection on the direct
    positivity check whenever the pencil answer fails midpoint
    verification.  Per-amplitude failures are recorded and the scan
    continues.  ``jobs`` parallelizes the per-quasi-momentum eigensolves
    within a rung (results are merged deterministically).
    """
    a_values = np.asarray(list(a_grid), dtype=float)
    if a_values.size == 0:
        raise ValueError("empty amplitude grid")
    magnitudes = np.abs(a_values)
    if np.any(np.diff(magnitudes) < 0):
        raise ValueError("amplitude grid must be ordered by |a| ascending")
    if magnitudes[0] > 0.3 + 1e-12:
        raise ValueError("start the amplitude grid at |a| <= 0.3 (warm-start ladder)")
    terminal = kind.terminal_amplitude
    if terminal is not None and magnitudes[-1] >= 0.999 * terminal:
        raise ValueError("amplitude grid reaches the terminal amplitude")

    n_jobs = _jobs_from_env(jobs)
    table = asymptotic_constants(kind)
    grid = default_verification_grid()

    c_minus = np.full(a_values.size, np.nan)
    c_plus = np.full(a_values.size, np.nan)
    verified = np.zeros(a_values.size, dtype=bool)
    midpoint_min = np.full(a_values.size, np.nan)
    methods: list[str] = []
    errors: list[str] = []

    c_ref = table.c0
    previous: WaveProfile | None = None
    for index, a in enumerate(a_values):
        if a == 0.0:
            # positivity holds exactly at the balance speed only
            c_minus[index] = c_plus[index] = table.c0
            verified[index] = True
            midpoint_min[index] = 0.0
            methods.append("exact")
            errors.append("")
            continue
        try:
            previous = solve_wave(kind, float(a), m, tol=tol, initial=previous)
            profile = previous
            if n_jobs > 1:
                with ThreadPoolExecutor(max_workers=n_jobs) as pool:
                    ops = list(pool.map(lambda k: assemble(profile, float(k)), grid))
            else:
                ops = [assemble(profile, float(k)) for k in grid]

            method = "pencil"
            bounds = None
            try:
                bounds = find_c_boundaries(profile, delta_kappa, c_ref=c_ref)
                mid = 0.5 * (bounds[0] + bounds[1])
                if not all(_is_positive_definite(op, profile, mid) for op in ops):
                    log.info(
                        "a=%g: pencil interval (%.4g, %.4g) failed midpoint "
                        "verification; bisecting the direct check",
                        a, bounds[0], bounds[1],
                    )
                    bounds = None
            except (NoPositiveReference, ComplexPencil, EigensolverFailure) as exc:
                log.info("a=%g: pencil route unavailable (%s)", a, exc)
                bounds = None
            if bounds is None:
                method = "bisection"
                inside = _find_inside_point(ops, profile, c_ref)
                if inside is None:
                    raise NoPositiveReference(
                        f"no positive-definite speed found near reference {c_ref:g}"
                    )
                bounds = (
                    _bisect_boundary(ops, profile, inside, -1, bisect_tol),
                    _bisect_boundary(ops, profile, inside, +1, bisect_tol),
                )

            lo, hi = bounds
            mid = 0.5 * (lo + hi)
            if n_jobs > 1:
                with ThreadPoolExecutor(max_workers=n_jobs) as pool:
                    lows = list(
                        pool.map(lambda op: _deflated_min_eig(op, profile, mid), ops)
                    )
            else:
                lows = [_deflated_min_eig(op, profile, mid) for op in ops]
            worst = int(np.argmin(lows))
            c_minus[index] = lo
            c_plus[index] = hi
            midpoint_min[index] = lows[worst]
            verified[index] = lows[worst] > 0.0
            methods.append(method)
            errors.append("")
            c_ref = mid
        except RedostError as exc:
            methods.append("failed")
            errors.append(f"{type(exc).__name__}: {exc}")
            log.warning("a=%g failed: %s", a, exc)
    return PositivityBoundary(
        kind=kind,
        a_values=a_values,
        c_minus=c_minus,
        c_plus=c_plus,
        delta_kappa=delta_kappa,
        verified=verified,
        midpoint_min_lambda=midpoint_min,
        method=tuple(methods),
        errors=tuple(errors),
    )


def _deflated_min_eig(op: BlochOperator, profile: WaveProfile, c: float) -> float:
    pencil = _deflated_pencil(op, profile, c)
    try:
        _, vecs = linalg.eigh(pencil, subset_by_index=[0, 0])
    except linalg.LinAlgError as exc:
        raise EigensolverFailure(f"eigensolve failed at kappa={op.kappa}: {exc}") from exc
    vec = vecs[:, 0]
    return float(np.real(vec.conj() @ (pencil @ vec)) / np.real(vec.conj() @ vec))
