"""Floquet-Bloch band curves and their small-amplitude expansions.

Bands are eigenvalue curves of the stability pencil over the Brillouin
zone.  The two lowest originate from the doubly degenerate zero of the
zero-amplitude problem: the ground band carries the translation zero at
kappa = 0, the excited band is its even partner that lifts off at rate
split_rate(c0) * a^2.  Band identity is tracked by eigenvector overlap
between neighbouring quasi-momenta, falling back to sorted order when the
overlap is ambiguous.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import EquationKind, WaveProfile, asymptotic_constants
from .errors import BandMisidentification
from .operators import BlochOperator, assemble, smallest_eigenvalues, translation_vector

__all__ = ["BandSet", "compute_bands", "band_curvature", "asymptotic_bands"]

_OVERLAP_FLOOR = 0.5


@dataclass(frozen=True)
class BandSet:
    """Band curves on a Brillouin-zone grid.

    ``bands[i, j]`` is the j-th smallest eigenvalue at ``kappa_grid[i]``;
    ``ground`` and ``excited`` give, per grid point, the column carrying
    the tracked ground/excited band (by continuity from kappa = 0).
    """

    kind: EquationKind
    a: float
    c: float
    kappa_grid: np.ndarray
    bands: np.ndarray
    ground: np.ndarray
    excited: np.ndarray

    def __post_init__(self):
        for field in ("kappa_grid", "bands", "ground", "excited"):
            getattr(self, field).setflags(write=False)

    def ground_values(self) -> np.ndarray:
        return self.bands[np.arange(len(self.kappa_grid)), self.ground]

    def excited_values(self) -> np.ndarray:
        return self.bands[np.arange(len(self.kappa_grid)), self.excited]


def _embed(op: BlochOperator, vecs: np.ndarray) -> np.ndarray:
    """Pad eigenvectors to the full 2m-mode index space (n = -m..m-1)."""
    full = np.zeros((2 * op.m, vecs.shape[1]), dtype=vecs.dtype)
    full[op.modes + op.m, :] = vecs
    return full


def _match(reference: np.ndarray, candidates: np.ndarray) -> tuple[int, float]:
    overlaps = np.abs(reference.conj() @ candidates)
    best = int(np.argmax(overlaps))
    return best, float(overlaps[best])


def compute_bands(
    profile: WaveProfile,
    c: float,
    kappa_grid,
    n_bands: int,
) -> BandSet:
    """Lowest ``n_bands`` eigenvalue curves over the given kappa grid."""
    kappa_grid = np.sort(np.asarray(kappa_grid, dtype=float))
    n_eig = n_bands + 2
    values = []
    vectors = []
    for kappa in kappa_grid:
        op = assemble(profile, float(kappa))
        count = min(n_eig, op.dimension)
        vals, vecs = smallest_eigenvalues(op, c, count, vectors=True)
        values.append(vals)
        vectors.append(_embed(op, vecs))
    bands = np.array([v[:n_bands] for v in values])

    npts = len(kappa_grid)
    ground = np.zeros(npts, dtype=int)
    excited = np.minimum(1, bands.shape[1] - 1) * np.ones(npts, dtype=int)
    if profile.a != 0.0:
        start = int(np.argmin(np.abs(kappa_grid)))
        op0 = assemble(profile, float(kappa_grid[start]))
        u_prime = np.zeros(2 * profile.m, dtype=complex)
        u_prime[op0.modes + profile.m] = translation_vector(profile, op0.modes)
        g0, _ = _match(u_prime, vectors[start])
        ground[start] = min(g0, n_bands - 1)
        excited[start] = 0 if ground[start] != 0 else 1
        for step in (1, -1):
            rng = range(start + step, npts, step) if step > 0 else range(start - 1, -1, -1)
            prev = start
            for i in rng:
                for label in (ground, excited):
                    ref = vectors[prev][:, label[prev]]
                    best, overlap = _match(ref, vectors[i])
                    label[i] = min(best, n_bands - 1) if overlap >= _OVERLAP_FLOOR else label[prev]
                if ground[i] == excited[i]:
                    excited[i] = 0 if ground[i] != 0 else 1
                prev = i
    return BandSet(
        kind=profile.kind,
        a=profile.a,
        c=c,
        kappa_grid=kappa_grid,
        bands=bands,
        ground=ground,
        excited=excited,
    )


def band_curvature(profile: WaveProfile, c: float, delta_kappa: float) -> float:
    """Second difference of the ground band through kappa = 0.

    Approximates the curvature whose sign change locates the positivity
    boundaries.  Raises BandMisidentification when eigenvector tracking
    cannot follow the ground band across the stencil.
    """
    if delta_kappa <= 0.0:
        raise ValueError("delta_kappa must be positive")
    op0 = assemble(profile, 0.0)
    count = min(6, op0.dimension)
    vals0, vecs0 = smallest_eigenvalues(op0, c, count, vectors=True)
    if profile.a == 0.0:
        lam0 = vals0[0]
        lam_side = []
        for kappa in (delta_kappa, -delta_kappa):
            op = assemble(profile, kappa)
            vals, _ = smallest_eigenvalues(op, c, 1)
            lam_side.append(vals[0])
    else:
        u_prime = translation_vector(profile, op0.modes)
        g0, overlap0 = _match(u_prime, vecs0)
        if overlap0 < _OVERLAP_FLOOR:
            raise BandMisidentification(
                f"translation mode not found at kappa = 0 (best overlap {overlap0:.2f})",
                gap=float(vals0[min(g0 + 1, count - 1)] - vals0[g0]),
            )
        lam0 = vals0[g0]
        reference = np.zeros(2 * profile.m, dtype=complex)
        reference[op0.modes + profile.m] = vecs0[:, g0]
        lam_side = []
        for kappa in (delta_kappa, -delta_kappa):
            op = assemble(profile, kappa)
            vals, vecs = smallest_eigenvalues(op, c, count, vectors=True)
            best, overlap = _match(reference, _embed(op, vecs))
            if overlap < _OVERLAP_FLOOR:
                gap = float(vals[min(best + 1, count - 1)] - vals[best])
                raise BandMisidentification(
                    f"ground band lost at kappa = {kappa:.2e} "
                    f"(best overlap {overlap:.2f})",
                    gap=gap,
                )
            lam_side.append(vals[best])
    return float((lam_side[0] - 2.0 * lam0 + lam_side[1]) / delta_kappa**2)


def asymptotic_bands(
    kind: EquationKind,
    a: float,
    c: float,
    kappa: float,
) -> tuple[float, float]:
    """Small-amplitude expansions of the two lowest bands near kappa = 0.

    Valid for |c - c0| = O(a); the ground band stays pinned to zero at
    kappa = 0 while the excited one lifts off by split_rate(c0) * a^2.
    """
    table = asymptotic_constants(kind)
    half_curv = 0.5 * table.band_curvature0
    if a == 0.0:
        if c != table.c0:
            raise ValueError("zero-amplitude expansion requires c = c0")
        spread = 0.0
        lift = 0.0
    else:
        spread = table.mode_coupling**2 * (c - table.c0) ** 2 / (
            table.split_rate_c0 * a * a
        )
        lift = table.split_rate_c0 * a * a
    ground = (half_curv - spread) * kappa * kappa
    excited = lift + (half_curv + spread) * kappa * kappa
    return float(ground), float(excited)
