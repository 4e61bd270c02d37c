import math

import numpy as np
import pytest

from redost import (
    AliasingFailure,
    EquationKind,
    RangeViolation,
    compute_invariant,
    continue_family,
    solve_wave,
    terminal_profile,
)

RO, MRO, SP = EquationKind.RO, EquationKind.MRO, EquationKind.SP


def test_zero_amplitude_gives_zero_solution():
    p = solve_wave(RO, 0.0, 64)
    assert np.all(p.coeffs == 0.0)
    assert p.gamma == 1.0
    assert p.invariant == 0.0
    assert p.ode_residual == 0.0


def test_mode_count_validation():
    with pytest.raises(ValueError):
        solve_wave(RO, 0.05, 48)
    with pytest.raises(ValueError):
        solve_wave(RO, 0.05, 8)
    with pytest.raises(ValueError):
        solve_wave(RO, 0.05, 64, tol=0.0)


def test_terminal_amplitude_guard():
    with pytest.raises(RangeViolation):
        solve_wave(RO, -0.7, 256)
    with pytest.raises(RangeViolation):
        solve_wave(MRO, 1.33, 256)


def test_gamma_matches_stokes_expansion(solved):
    a = 0.05
    p = solved("ro", a, 64)
    assert abs(p.gamma - (1.0 + a**2 / 6.0)) < 10.0 * a**4
    p = solved("mro", a, 64)
    assert abs(p.gamma - (1.0 + a**2 / 8.0)) < 10.0 * a**4
    p = solved("sp", a, 64)
    assert abs(p.gamma - (1.0 - a**2 / 8.0)) < 10.0 * a**4


def test_normalization_exact(solved):
    for label in ("ro", "mro", "sp"):
        assert solved(label, 0.05, 64).coeffs[0] == 0.05


def test_profiles_even():
    p = solve_wave(RO, 0.3, 256)
    u = p.values(0)
    mirrored = np.concatenate([u[:1], u[:0:-1]])
    even_norm = np.linalg.norm(u)
    assert np.linalg.norm(u - mirrored) < 1e-12 * even_norm


def test_stokes_convergence_order():
    amplitudes = [0.02, 0.04, 0.08]
    errors = [abs(solve_wave(RO, a, 64).gamma - (1 + a * a / 6)) for a in amplitudes]
    slope = np.polyfit(np.log(amplitudes), np.log(errors), 1)[0]
    assert abs(slope - 4.0) <= 0.3


def test_second_mode_ratios(solved):
    p = solved("ro", 0.02, 64)
    assert p.coeffs[1] / 0.02**2 == pytest.approx(1.0 / 3.0, rel=0.05)
    p = solved("mro", 0.02, 64)
    assert abs(p.coeffs[1]) < 1e-10  # even harmonics absent for the cubic family
    assert p.coeffs[2] / 0.02**3 == pytest.approx(3.0 / 64.0, rel=0.05)


def test_residual_and_invariant_quality(solved):
    for label, a in (("ro", 0.3), ("mro", 0.5), ("sp", 0.3)):
        p = solved(label, a, 256)
        assert p.ode_residual < 1e-10
        assert p.invariant_deviation < 1e-11
        value, deviation = compute_invariant(p)
        assert value == pytest.approx(p.invariant, rel=1e-13)
        assert deviation == p.invariant_deviation


def test_invariant_small_amplitude(solved):
    p = solved("ro", 0.05, 64)
    assert p.invariant == pytest.approx(0.05**2 / 2.0, abs=10 * 0.05**4)


def test_invariant_parabolic_terminal_profile():
    # grid mean of the first integral converges to gamma^3/6 despite the
    # Gibbs error of the truncated non-smooth profile
    p = terminal_profile(RO, m=1024)
    value, deviation = compute_invariant(p)
    assert value == pytest.approx(math.pi**6 / 4374.0, abs=1e-4)
    assert deviation > 1e-6  # non-smooth: the pointwise spread is not small


def test_continuation_family():
    rungs = [-0.1, -0.2, -0.3]
    profiles = continue_family(RO, rungs, 128)
    assert [p.a for p in profiles] == rungs
    assert all(p.iterations <= 10 for p in profiles)


def test_continuation_empty():
    assert continue_family(RO, [], 64) == []


def test_continuation_aborts_past_terminal():
    rungs = [-0.1, -0.3, -0.5, -0.67]
    with pytest.raises(RangeViolation) as info:
        continue_family(RO, rungs, 256)
    err = info.value
    assert err.failed_index == 3
    assert err.failed_amplitude == -0.67
    assert [p.a for p in err.partial_profiles] == rungs[:3]


def test_continuation_requires_monotone_and_small_start():
    with pytest.raises(ValueError):
        continue_family(RO, [-0.1, -0.3, -0.2], 64)
    with pytest.raises(ValueError):
        continue_family(RO, [-0.2, -0.3], 64)


def test_aliasing_guard_fires_for_underresolved_profile():
    # the steep a=0.64 wave cannot be represented with 64 modes
    with pytest.raises((AliasingFailure, RangeViolation)):
        continue_family(RO, [0.1, 0.3, 0.5, 0.64], 64)


def test_warm_start_from_other_resolution():
    seed = solve_wave(RO, 0.2, 128)
    p = solve_wave(RO, 0.25, 256, initial=seed)
    assert p.coeffs[0] == 0.25
    assert p.ode_residual < 1e-12
