import math

import numpy as np
import pytest
from scipy import linalg

from redost import (
    EquationKind,
    NoPositiveReference,
    assemble,
    check_positive,
    find_c_boundaries,
    scan_region,
)
from redost.positivity import default_verification_grid

RO, MRO, SP = EquationKind.RO, EquationKind.MRO, EquationKind.SP


def test_boundaries_small_amplitude_ro(solved):
    p = solved("ro", 0.05, 256)
    lo, hi = find_c_boundaries(p, 1e-3)
    assert lo == pytest.approx(0.5 - math.sqrt(3) * 0.025, abs=3 * 0.05**2)
    assert hi == pytest.approx(0.5 + math.sqrt(3) * 0.025, abs=3 * 0.05**2)


def test_boundaries_small_amplitude_mro(solved):
    p = solved("mro", 0.05, 256)
    lo, hi = find_c_boundaries(p, 1e-3)
    assert lo == pytest.approx(1.9, abs=3 * 0.05**2)
    assert hi == pytest.approx(2.1, abs=3 * 0.05**2)


def test_boundaries_make_pencil_singular(solved):
    p = solved("ro", 0.1, 128)
    lo, hi = find_c_boundaries(p, 1e-3)
    op = assemble(p, 1e-3)
    for c in (lo, hi):
        pencil = op.combination(c)
        smallest = np.min(np.abs(np.linalg.eigvalsh(pencil)))
        assert smallest < 1e-6


def test_pencil_eigenvalues_real_near_reference(solved):
    p = solved("ro", 0.1, 128)
    op = assemble(p, 1e-3)
    vals = linalg.eig(op.a_hat, op.b_hat, right=False)
    finite = vals[np.isfinite(vals)]
    window = finite[(finite.real > 0.3) & (finite.real < 0.8)]
    assert np.all(np.abs(window.imag) <= 1e-8 * np.abs(window))


def test_delta_kappa_validation(solved):
    with pytest.raises(ValueError):
        find_c_boundaries(solved("ro", 0.05, 64), 0.0)


def test_check_positive_inside_and_outside(solved):
    p = solved("ro", 0.1, 128)
    grid = default_verification_grid()
    inside = check_positive(p, 0.5, grid)
    assert inside.is_positive and inside.min_lambda > 0.0
    outside = check_positive(p, 0.7, grid)
    assert not outside.is_positive
    assert outside.min_lambda < 0.0
    assert abs(outside.argmin_kappa) <= 0.1  # first negativity near the origin


def test_check_positive_short_pulse(solved):
    p = solved("sp", 0.05, 128)
    chk = check_positive(p, 2.0, np.array([0.0, 0.05, 0.15, 0.3, 0.5]))
    assert not chk.is_positive
    assert chk.min_lambda == pytest.approx(-1.0 * 0.05**2, rel=0.1)
    assert abs(chk.argmin_kappa) < 0.1


def test_find_c_boundaries_short_pulse_raises(solved):
    with pytest.raises(NoPositiveReference) as info:
        find_c_boundaries(solved("sp", 0.05, 128), 1e-3)
    assert info.value.min_eigenvalue < 0.0


def test_methods_agree_small_amplitude(solved):
    # bisection on the direct check lands on the pencil boundary
    p = solved("ro", 0.1, 128)
    lo_p, hi_p = find_c_boundaries(p, 1e-3)
    grid = np.array([1e-3, 5e-3, 0.02, 0.05, 0.1, 0.2, 0.35, 0.5])

    def positive(c):
        return check_positive(p, c, grid).is_positive

    lo, hi = 0.5, 0.8
    while hi - lo > 1e-4:
        mid = 0.5 * (lo + hi)
        if positive(mid):
            lo = mid
        else:
            hi = mid
    assert 0.5 * (lo + hi) == pytest.approx(hi_p, abs=1e-3)


def test_scan_region_desk_scale():
    region = scan_region(RO, [0.0, 0.05, 0.1, 0.2], 1e-3, 128)
    assert region.a_values.tolist() == [0.0, 0.05, 0.1, 0.2]
    assert all(e == "" for e in region.errors)
    assert bool(np.all(region.verified))
    # degenerate entry at zero amplitude
    assert region.c_minus[0] == region.c_plus[0] == 0.5
    # interval straddles the balance speed at small amplitude and widens
    assert np.all(region.c_minus[1:] < 0.5) and np.all(region.c_plus[1:] > 0.5)
    widths = region.c_plus[1:] - region.c_minus[1:]
    assert np.all(np.diff(widths) > 0.0)
    # near zero amplitude the width follows the corollary slope
    assert widths[0] == pytest.approx(math.sqrt(3) * 0.05, rel=0.12)


def test_scan_region_validation():
    with pytest.raises(ValueError):
        scan_region(RO, [], 1e-3, 64)
    with pytest.raises(ValueError):
        scan_region(RO, [0.2, 0.1], 1e-3, 64)
    with pytest.raises(ValueError):
        scan_region(RO, [0.4, 0.5], 1e-3, 64)
    with pytest.raises(ValueError):
        scan_region(RO, [0.1, 0.666], 1e-3, 64)


def test_scan_region_jobs_deterministic():
    sequential = scan_region(RO, [0.05, 0.1], 1e-3, 64, jobs=1)
    threaded = scan_region(RO, [0.05, 0.1], 1e-3, 64, jobs=2)
    assert np.array_equal(sequential.c_minus, threaded.c_minus)
    assert np.array_equal(sequential.c_plus, threaded.c_plus)
    assert np.array_equal(sequential.midpoint_min_lambda, threaded.midpoint_min_lambda)
