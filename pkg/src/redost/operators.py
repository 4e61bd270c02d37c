"""Dense Bloch matrices of the Lyapunov Hessian and their eigensolves.

For a profile U and quasi-momentum kappa in [-1/2, 1/2], the Hessian of
the Lyapunov combination splits into an energy block and a Casimir block,

    P(kappa) = A(kappa) - sign * c * B(kappa),

discretized on the shifted wavenumbers k = kappa + n, n = -M..M-1, with
products applied pseudospectrally (multiplication operators become
Toeplitz-with-wraparound matrices of Fourier coefficients).  At kappa = 0
the n = 0 mode is removed: the operators act on the zero-mean subspace.
Even real profiles make every block real symmetric, which the assembly
detects and exploits.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import linalg

from .core import EquationKind, WaveProfile
from .errors import EigensolverFailure, ValidityViolation

__all__ = [
    "BlochOperator",
    "assemble",
    "smallest_eigenvalues",
    "perturbation_eigenvalue_L",
    "perturbation_eigenvalue_M",
    "translation_vector",
]

_REALNESS_TOL = 1e-12


def multiplication_matrix(values: np.ndarray) -> np.ndarray:
    """Mode-space matrix of pointwise multiplication by a grid function.

    Row/column order is n = -m..m-1.  Products are pseudospectral: the
    entry (i, j) is the DFT coefficient of the function at frequency
    n_i - n_j, wrapped modulo the grid length (aliasing included, exactly
    as evaluating the product on the grid).
    """
    values = np.asarray(values, dtype=float)
    n2 = values.shape[0]
    ghat = np.fft.fft(values) / n2
    ghat *= np.where(np.arange(n2) % 2 == 0, 1.0, -1.0)
    idx = (np.arange(n2)[:, None] - np.arange(n2)[None, :]) % n2
    return ghat[idx]


@dataclass(frozen=True)
class BlochOperator:
    """Energy and Casimir Hessian blocks at one quasi-momentum.

    ``a_hat`` discretizes the energy block (the Hessian of S at c = 0) and
    ``b_hat`` the Casimir block; the stability pencil at speed c is
    ``a_hat - combination_sign * c * b_hat``.  Both blocks are Hermitian by
    construction up to round-off; they are symmetrized on assembly and the
    relative defect recorded.
    """

    kind: EquationKind
    kappa: float
    m: int
    a_hat: np.ndarray
    b_hat: np.ndarray
    gamma: float
    invariant: float
    modes: np.ndarray
    hermiticity_defect: float

    def __post_init__(self):
        for field in ("a_hat", "b_hat", "modes"):
            arr = getattr(self, field)
            arr.setflags(write=False)

    @property
    def dimension(self) -> int:
        return self.a_hat.shape[0]

    def mode_index(self, n: int) -> int:
        hits = np.nonzero(self.modes == n)[0]
        if hits.size != 1:
            raise ValueError(f"mode {n} not present")
        return int(hits[0])

    def combination(self, c: float) -> np.ndarray:
        """The stability pencil A - sign*c*B at speed parameter c."""
        return self.a_hat - self.kind.combination_sign * c * self.b_hat


def _hermitize(mat: np.ndarray) -> tuple[np.ndarray, float]:
    sym = 0.5 * (mat + mat.conj().T)
    scale = np.linalg.norm(sym)
    defect = np.linalg.norm(mat - mat.conj().T) / scale if scale > 0 else 0.0
    if np.iscomplexobj(sym):
        imag = float(np.max(np.abs(sym.imag)))
        real_scale = float(np.max(np.abs(sym.real)))
        if imag <= _REALNESS_TOL * max(real_scale, 1.0):
            sym = np.ascontiguousarray(sym.real)
    return sym, float(defect)


def assemble(profile: WaveProfile, kappa: float) -> BlochOperator:
    """Assemble the Hessian blocks of a profile at one quasi-momentum."""
    if not -0.5 <= kappa <= 0.5:
        raise ValueError("kappa must lie in the Brillouin zone [-1/2, 1/2]")
    kind = profile.kind
    gamma = profile.gamma
    invariant = profile.invariant
    m = profile.m
    u = profile.values(0)
    du = profile.values(1)

    speed_coef = gamma - kind.nonlinearity(u)
    low = float(speed_coef.min())
    if low <= 0.0:
        raise ValidityViolation(f"gamma - N(U) reaches {low:.3e}", min_value=low)

    n = np.arange(-m, m)
    keep = np.ones(2 * m, dtype=bool)
    if kappa == 0.0:
        keep[m] = False  # drop n = 0: zero-mean subspace
    modes = n[keep]
    k = kappa + modes

    a_full = multiplication_matrix(speed_coef)[np.ix_(keep, keep)]
    a_hat = np.diag(k**-2.0) - a_full

    if kind is EquationKind.RO:
        radicand = gamma**3 - 6.0 * invariant
        if radicand <= 0.0:
            raise ValidityViolation(
                f"gamma^3 - 6I = {radicand:.3e} is not positive", min_value=radicand
            )
        quintic = multiplication_matrix(speed_coef**5)[np.ix_(keep, keep)]
        k2 = k**2
        b_hat = radicand ** (-2.0 / 3.0) * np.eye(len(k)) - radicand ** (-5.0 / 3.0) * (
            k2[:, None] * quintic * k2[None, :]
        )
    elif kind is EquationKind.MRO:
        radicand = gamma**2 - 2.0 * invariant
        if radicand <= 0.0:
            raise ValidityViolation(
                f"gamma^2 - 2I = {radicand:.3e} is not positive", min_value=radicand
            )
        slope_arg = 1.0 - du**2
        low = float(slope_arg.min())
        if low <= 0.0:
            raise ValidityViolation(f"1 - (U')^2 reaches {low:.3e}", min_value=low)
        weight = multiplication_matrix(slope_arg**-1.5)[np.ix_(keep, keep)]
        b_hat = 0.5 * radicand**-0.5 * np.eye(len(k)) - 0.5 * (
            k[:, None] * weight * k[None, :]
        )
    else:
        radicand = gamma**2 + 2.0 * invariant
        if radicand <= 0.0:
            raise ValidityViolation(
                f"gamma^2 + 2I = {radicand:.3e} is not positive", min_value=radicand
            )
        weight = multiplication_matrix((1.0 + du**2) ** -1.5)[np.ix_(keep, keep)]
        b_hat = -0.5 * radicand**-0.5 * np.eye(len(k)) + 0.5 * (
            k[:, None] * weight * k[None, :]
        )

    a_hat, defect_a = _hermitize(a_hat)
    b_hat, defect_b = _hermitize(b_hat)
    return BlochOperator(
        kind=kind,
        kappa=kappa,
        m=m,
        a_hat=a_hat,
        b_hat=b_hat,
        gamma=gamma,
        invariant=invariant,
        modes=modes,
        hermiticity_defect=max(defect_a, defect_b),
    )


def _dominant_mode_tiebreak(values: np.ndarray, vectors: np.ndarray) -> np.ndarray:
    """Stable order for exactly degenerate eigenvalues: ascending dominant mode."""
    order = np.arange(len(values))
    i = 0
    while i < len(values):
        j = i + 1
        while j < len(values) and values[j] == values[i]:
            j += 1
        if j - i > 1:
            dom = np.argmax(np.abs(vectors[:, i:j]), axis=0)
            order[i:j] = order[i:j][np.argsort(dom, kind="stable")]
        i = j
    return order


_REFINE_MAX_COUNT = 32


def _rayleigh_ritz(pencil: np.ndarray, vecs: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    # One Rayleigh-Ritz pass in the computed low subspace.  The dense solve
    # carries an absolute error ~eps*||P||, which for these quartically
    # graded matrices swamps eigenvalues near zero; quadratic forms through
    # the mode-localized eigenvectors do not, so the Ritz values recover
    # them to near round-off.
    pv = pencil @ vecs
    gram = vecs.conj().T @ pv
    overlap = vecs.conj().T @ vecs
    gram = 0.5 * (gram + gram.conj().T)
    overlap = 0.5 * (overlap + overlap.conj().T)
    vals, rot = linalg.eigh(gram, overlap)
    return vals, vecs @ rot


def smallest_eigenvalues(
    op: BlochOperator,
    c: float,
    count: int,
    vectors: bool = False,
) -> tuple[np.ndarray, np.ndarray | None]:
    """The ``count`` algebraically smallest eigenvalues of the pencil at c.

    Returns ``(values, vectors)`` in ascending order; ``vectors`` is None
    unless requested (columns match values).  Small batches are refined by
    a Rayleigh-Ritz pass, which protects eigenvalues near zero from the
    eps*||P|| noise of the dense solve.  Exact degeneracies are ordered by
    ascending dominant-mode index.
    """
    if count > op.dimension:
        raise ValueError("count exceeds operator dimension")
    pencil = op.combination(c)
    refine = count <= _REFINE_MAX_COUNT
    try:
        if vectors or refine:
            vals, vecs = linalg.eigh(pencil, subset_by_index=[0, count - 1])
        else:
            vals = linalg.eigh(pencil, subset_by_index=[0, count - 1], eigvals_only=True)
            vecs = None
    except linalg.LinAlgError as exc:
        raise EigensolverFailure(
            f"dense eigensolve failed at kappa={op.kappa}, c={c}: {exc}"
        ) from exc
    if refine:
        vals, vecs = _rayleigh_ritz(pencil, vecs)
    if vecs is not None:
        order = _dominant_mode_tiebreak(vals, vecs)
        vals = vals[order]
        vecs = vecs[:, order]
    return vals, (vecs if vectors else None)


def translation_vector(profile: WaveProfile, modes: np.ndarray) -> np.ndarray:
    """Mode coefficients of U' on the given mode set, normalized.

    This is the exact zero mode of the stability pencil at kappa = 0 for
    every c; band tracking and zero-mode checks key off it.
    """
    m = profile.m
    coeffs = np.zeros(len(modes), dtype=complex)
    for i, n in enumerate(modes):
        an = abs(n)
        if 1 <= an <= m:
            coeffs[i] = 0.5j * n * profile.coeffs[an - 1]
    norm = np.linalg.norm(coeffs)
    if norm == 0.0:
        raise ValueError("zero profile has no translation mode")
    return coeffs / norm


def _even_overlap_pick(op: BlochOperator, mat: np.ndarray) -> float:
    """Eigenvalue of ``mat`` whose eigenvector is closest to cos(z)."""
    try:
        vals, vecs = linalg.eigh(mat)
    except linalg.LinAlgError as exc:
        raise EigensolverFailure(f"dense eigensolve failed: {exc}") from exc
    i_plus = op.mode_index(1)
    i_minus = op.mode_index(-1)
    overlap = np.abs(vecs[i_plus, :] + vecs[i_minus, :]) / np.sqrt(2.0)
    pick = int(np.argmax(overlap))
    vec = vecs[:, pick]
    # Rayleigh quotient through the localized eigenvector beats the
    # eps*||mat|| accuracy of the dense solve on this near-zero eigenvalue.
    return float(np.real(vec.conj() @ (mat @ vec)) / np.real(vec.conj() @ vec))


def perturbation_eigenvalue_L(kind: EquationKind, a_small: float, m: int = 256) -> float:
    """Near-zero eigenvalue of the discretized energy Hessian at amplitude a.

    The eigenvalue that bifurcates from the doubly degenerate zero along
    the even (cosine) direction; for small a it scales as the family's
    energy split rate times a^2.
    """
    op = _small_amplitude_operator(kind, a_small, m)
    return _even_overlap_pick(op, op.a_hat)


def perturbation_eigenvalue_M(kind: EquationKind, a_small: float, m: int = 256) -> float:
    """Near-zero eigenvalue of the discretized Casimir Hessian at amplitude a."""
    op = _small_amplitude_operator(kind, a_small, m)
    return _even_overlap_pick(op, op.b_hat)


def _small_amplitude_operator(kind: EquationKind, a_small: float, m: int) -> BlochOperator:
    if not 0.0 < a_small <= 0.1:
        raise ValueError("a_small must lie in (0, 0.1]")
    from .solver import solve_wave

    profile = solve_wave(kind, a_small, m)
    return assemble(profile, 0.0)
