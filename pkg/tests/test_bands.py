import numpy as np
import pytest

from redost import (
    EquationKind,
    asymptotic_bands,
    band_curvature,
    compute_bands,
    dispersion,
)

RO, MRO = EquationKind.RO, EquationKind.MRO


def test_bands_at_zero_amplitude_equal_dispersion(solved):
    p = solved("ro", 0.0, 64)
    grid = np.linspace(-0.5, 0.5, 11)
    bands = compute_bands(p, 0.5, grid, 4)
    for i, kappa in enumerate(bands.kappa_grid):
        n = np.arange(-64, 64)
        k = kappa + n
        k = k[k != 0.0]
        expected = np.sort(dispersion(RO, 0.5, k))[:4]
        assert np.max(np.abs(bands.bands[i] - expected)) < 1e-8


def test_zero_amplitude_ground_band_closed_form(solved):
    # near kappa = 0 the ground band follows the factorized symbol branch
    p = solved("ro", 0.0, 64)
    grid = np.array([-0.1, -0.05, 0.0, 0.05, 0.1])
    bands = compute_bands(p, 0.5, grid, 2)
    for i, kappa in enumerate(grid):
        if kappa == 0.0:
            assert abs(bands.ground_values()[i]) < 1e-12
            continue
        branch = min(
            (2 + s * kappa) ** 2 * (3 + s * 2 * kappa + kappa**2) * kappa**2
            / (2 * (1 + s * kappa) ** 2)
            for s in (+1, -1)
        )
        assert bands.ground_values()[i] == pytest.approx(branch, rel=1e-9, abs=1e-12)


def test_bands_sorted_and_even_symmetric(solved):
    p = solved("ro", 0.1, 128)
    grid = np.linspace(-0.5, 0.5, 21)
    bands = compute_bands(p, 0.5, grid, 3)
    assert np.all(np.diff(bands.bands, axis=1) >= -1e-12)
    flipped = bands.bands[::-1]
    assert np.max(np.abs(bands.bands - flipped)) < 1e-8


def test_band_labels_inside_interval(solved):
    p = solved("ro", 0.1, 128)
    grid = np.linspace(-0.5, 0.5, 21)
    bands = compute_bands(p, 0.5, grid, 3)
    i0 = int(np.argmin(np.abs(grid)))
    assert abs(bands.ground_values()[i0]) < 1e-8  # translation zero
    assert np.all(bands.ground_values() >= -1e-10)
    assert np.all(bands.excited_values() > 0.0)
    assert bands.excited_values()[i0] == pytest.approx(2.0 * 0.01, rel=0.06)


def test_ground_band_dips_negative_outside_interval(solved):
    p = solved("ro", 0.1, 128)
    grid = np.linspace(-0.2, 0.2, 17)
    bands = compute_bands(p, 0.7, grid, 2)
    assert bands.ground_values().min() < -1e-3


def test_curvature_zero_amplitude(solved):
    assert band_curvature(solved("ro", 0.0, 256), 0.5, 1e-3) == pytest.approx(12.0, rel=0.01)
    assert band_curvature(solved("mro", 0.0, 256), 2.0, 1e-3) == pytest.approx(8.0, rel=0.01)


def test_curvature_sign_tracks_interval(solved):
    p = solved("ro", 0.1, 256)
    assert band_curvature(p, 0.5, 1e-3) > 0.0
    assert band_curvature(p, 0.5 + np.sqrt(3) * 0.1, 1e-3) == pytest.approx(0.0, abs=2.5)
    assert band_curvature(p, 0.7, 1e-3) < 0.0


def test_curvature_validation(solved):
    with pytest.raises(ValueError):
        band_curvature(solved("ro", 0.1, 128), 0.5, 0.0)


def test_asymptotic_bands_examples():
    gr, ex = asymptotic_bands(RO, 0.1, 0.5, 0.01)
    assert gr == pytest.approx(6e-4, rel=1e-12)
    assert ex == pytest.approx(0.02 + 6e-4, rel=1e-12)
    gr, ex = asymptotic_bands(RO, 0.1, 0.5, 0.0)
    assert gr == 0.0
    assert ex == pytest.approx(0.02, rel=1e-12)
    gr, ex = asymptotic_bands(MRO, 0.0, 2.0, 0.0)
    assert gr == 0.0 and ex == 0.0
    with pytest.raises(ValueError):
        asymptotic_bands(RO, 0.0, 0.6, 0.01)


def test_asymptotic_match_property(solved):
    # numeric and asymptotic ground bands differ by O(|a| kappa^2 + kappa^3)
    ratios = []
    for a in (0.02, 0.05, 0.1):
        p = solved("ro", a, 128)
        c = 0.5 + 0.5 * a
        for kappa in (0.25 * a * a, a * a):
            op_bands = compute_bands(p, c, np.array([-kappa, 0.0, kappa]), 2)
            numeric = op_bands.ground_values()[-1]
            asym, _ = asymptotic_bands(RO, a, c, kappa)
            ratios.append(abs(numeric - asym) / (abs(a) * kappa**2 + abs(kappa) ** 3))
    assert max(ratios) < 60.0


def test_excited_band_positive_at_balance_speed(solved):
    for a in (0.02, 0.1):
        p = solved("ro", a, 128)
        grid = np.linspace(-0.5, 0.5, 11)
        bands = compute_bands(p, 0.5, grid, 2)
        assert np.all(bands.excited_values() > 0.0)
