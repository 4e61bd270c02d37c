import numpy as np
import pytest

from redost import (
    EquationKind,
    ValidityViolation,
    assemble,
    dispersion,
    dispersion_factorized,
    perturbation_eigenvalue_L,
    perturbation_eigenvalue_M,
    smallest_eigenvalues,
    terminal_profile,
)
from redost.operators import multiplication_matrix, translation_vector

RO, MRO, SP = EquationKind.RO, EquationKind.MRO, EquationKind.SP


def test_multiplication_matrix_constant_and_cosine():
    m = 16
    assert np.allclose(multiplication_matrix(2.5 * np.ones(2 * m)), 2.5 * np.eye(2 * m), atol=1e-13)
    z = -np.pi + (np.pi / m) * np.arange(2 * m)
    w = multiplication_matrix(np.cos(z))
    # multiplication by cos z shifts modes by +-1 with weight 1/2
    expected = np.zeros((2 * m, 2 * m))
    for i in range(2 * m):
        expected[i, (i + 1) % (2 * m)] = 0.5
        expected[i, (i - 1) % (2 * m)] = 0.5
    assert np.max(np.abs(w - expected)) < 1e-13


def test_zero_amplitude_diagonals(solved):
    op = assemble(solved("ro", 0.0, 32), 0.0)
    assert op.dimension == 63
    n = op.modes.astype(float)
    assert np.max(np.abs(np.diag(op.a_hat) - (n**-2.0 - 1.0))) < 1e-12
    assert np.max(np.abs(op.a_hat - np.diag(np.diag(op.a_hat)))) < 1e-12
    assert np.max(np.abs(np.diag(op.b_hat) - (1.0 - n**4))) < 1e-9

    opm = assemble(solved("mro", 0.0, 32), 0.0)
    assert np.max(np.abs(np.diag(opm.b_hat) - 0.5 * (1.0 - n**2))) < 1e-12

    opsp = assemble(solved("sp", 0.0, 32), 0.0)
    assert np.max(np.abs(np.diag(opsp.b_hat) - 0.5 * (n**2 - 1.0))) < 1e-12


def test_dimension_conventions(solved):
    p = solved("ro", 0.05, 32)
    assert assemble(p, 0.0).dimension == 63
    assert assemble(p, 0.25).dimension == 64
    with pytest.raises(ValueError):
        assemble(p, 0.75)


def test_constant_coefficient_oracle(solved):
    # at zero amplitude all pencil eigenvalues equal the dispersion symbol,
    # including the factorized forms at the balance speed
    for label, c0 in (("ro", 0.5), ("mro", 2.0), ("sp", 2.0)):
        p = solved(label, 0.0, 32)
        for kappa in (0.31, 0.5):
            op = assemble(p, kappa)
            k = kappa + np.arange(-32, 32)
            for c in (c0, 0.8 * c0):
                vals, _ = smallest_eigenvalues(op, c, op.dimension)
                expected = np.sort(dispersion(p.kind, c, k))
                assert np.max(np.abs(vals - expected)) < 1e-8
            vals, _ = smallest_eigenvalues(op, c0, op.dimension)
            expected = np.sort(dispersion_factorized(p.kind, k))
            assert np.max(np.abs(vals - expected)) < 1e-8


def test_hermiticity(solved):
    for label, a in (("ro", 0.2), ("mro", 0.4), ("sp", 0.2)):
        p = solved(label, a, 128)
        for kappa in (0.0, 0.17):
            op = assemble(p, kappa)
            assert op.hermiticity_defect < 1e-12
            assert np.max(np.abs(op.a_hat - op.a_hat.conj().T)) == 0.0
            assert np.max(np.abs(op.b_hat - op.b_hat.conj().T)) == 0.0


def test_translation_mode_annihilation(solved):
    for label, a in (("ro", 0.1), ("ro", 0.3), ("mro", 0.5), ("sp", 0.1)):
        p = solved(label, a, 256)
        op = assemble(p, 0.0)
        mode = translation_vector(p, op.modes)
        for c in (0.3, asymptotic_c0(p.kind), 1.9):
            residual = np.linalg.norm(op.combination(c) @ mode)
            assert residual < 1e-8


def asymptotic_c0(kind):
    from redost import asymptotic_constants

    return asymptotic_constants(kind).c0


def test_translation_zero_eigenvalue(solved):
    p = solved("ro", 0.1, 256)
    op = assemble(p, 0.0)
    for c in (0.35, 0.5, 0.7):
        vals, _ = smallest_eigenvalues(op, c, 3)
        assert np.min(np.abs(vals)) < 1e-8


def test_split_eigenvalue_against_rate(solved):
    # second-smallest eigenvalue at the balance speed approaches the
    # combined split rate times a^2
    a = 0.05
    p = solved("ro", a, 256)
    vals, _ = smallest_eigenvalues(assemble(p, 0.0), 0.5, 2)
    assert vals[1] == pytest.approx(2.0 * a * a, rel=0.05)


def test_perturbation_rates(solved):
    a = 0.05
    expected = {
        RO: (1.0 / 3.0, -10.0 / 3.0),
        MRO: (0.25, -0.375),
        SP: (-0.25, -0.375),
    }
    for kind, (rate_l, rate_m) in expected.items():
        assert perturbation_eigenvalue_L(kind, a, 256) / a**2 == pytest.approx(rate_l, rel=0.10)
        assert perturbation_eigenvalue_M(kind, a, 256) / a**2 == pytest.approx(rate_m, rel=0.10)


def test_perturbation_rate_validation():
    with pytest.raises(ValueError):
        perturbation_eigenvalue_L(RO, 0.2)
    with pytest.raises(ValueError):
        perturbation_eigenvalue_L(RO, 0.0)


def test_identity_cross_check(solved):
    # assembling the quartic block from the curvature density directly
    # agrees with the speed-coefficient route through the first integral
    p = solved("ro", 0.3, 256)
    gamma, inv = p.gamma, p.invariant
    radicand = gamma**3 - 6.0 * inv
    keep = np.ones(2 * p.m, dtype=bool)
    keep[p.m] = False
    k2 = np.arange(-p.m, p.m)[keep].astype(float) ** 2
    quint = multiplication_matrix((gamma - p.values(0)) ** 5)[np.ix_(keep, keep)]
    direct = multiplication_matrix((1.0 - 3.0 * p.values(2)) ** (-5.0 / 3.0))[np.ix_(keep, keep)]
    b1 = radicand ** (-5.0 / 3.0) * (k2[:, None] * quint * k2[None, :])
    b2 = k2[:, None] * direct * k2[None, :]
    assert np.linalg.norm(b1 - b2) / np.linalg.norm(b1) < 1e-10


def test_validity_violation_at_terminal_profile():
    with pytest.raises(ValidityViolation):
        assemble(terminal_profile(RO, 256), 0.0)


def test_count_validation(solved):
    op = assemble(solved("ro", 0.05, 32), 0.0)
    with pytest.raises(ValueError):
        smallest_eigenvalues(op, 0.5, op.dimension + 1)
