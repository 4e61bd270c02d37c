"""Acceptance checks: every headline number the package must reproduce.

Each criterion is a function returning ``CriterionResult`` records with
measured values, so the CLI can print one PASS/FAIL line per criterion
and the test suite can assert on the same code path.  ``fast=True``
substitutes desk-scale mode counts (clearly labelled) where the full runs
cost minutes; checks that only make sense at full scale are skipped in
fast mode.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .asymptotics import dispersion
from .bands import band_curvature
from .core import EquationKind, asymptotic_constants
from .errors import NoPositiveReference
from .operators import (
    assemble,
    perturbation_eigenvalue_L,
    perturbation_eigenvalue_M,
    smallest_eigenvalues,
)
from .positivity import check_positive, find_c_boundaries, scan_region
from .solver import continue_family, solve_wave

__all__ = ["CriterionResult", "run_criteria", "CRITERIA"]


@dataclass(frozen=True)
class CriterionResult:
    number: int
    name: str
    passed: bool | None  # None means skipped
    summary: str

    @property
    def label(self) -> str:
        if self.passed is None:
            return "SKIP"
        return "PASS" if self.passed else "FAIL"


def _kinds(selected) -> set[EquationKind]:
    if selected is None:
        return {EquationKind.RO, EquationKind.MRO, EquationKind.SP}
    if isinstance(selected, (str, EquationKind)):
        selected = [selected]
    return {EquationKind.parse(k) if isinstance(k, str) else k for k in selected}


def _newton_chain(fast: bool):
    if fast:
        m = 512
        ladder = [-0.1, -0.2, -0.3, -0.4, -0.5]
        targets = (-0.3, -0.5)
    else:
        m = 2048
        ladder = [-0.1, -0.2, -0.3, -0.4, -0.5, -0.55, -0.6, -0.65]
        targets = (-0.3, -0.5, -0.6, -0.65)
    profiles = continue_family(EquationKind.RO, ladder, m)
    by_a = {p.a: p for p in profiles}
    return m, targets, by_a


def criterion_1_2_3(fast: bool) -> list[CriterionResult]:
    m, targets, by_a = _newton_chain(fast)
    scale = f"M={m}" + (" (fast)" if fast else "")

    iters = {a: by_a[a].iterations for a in targets}
    worst = max(iters.values())
    res1 = CriterionResult(
        1,
        "newton convergence",
        worst <= 10,
        f"{scale}: iterations to increment<1e-15 per amplitude {iters} (need <= 10)",
    )

    devs = {a: by_a[a].invariant_deviation for a in targets}
    res2 = CriterionResult(
        2,
        "invariant conservation",
        max(devs.values()) < 1e-11,
        f"{scale}: max invariant deviation {max(devs.values()):.2e} (need < 1e-11)",
    )

    if fast:
        res3 = CriterionResult(
            3, "coefficient decay", None, "skipped in fast mode (needs M=2048, a=-0.65)"
        )
    else:
        tail = np.abs(by_a[-0.65].coeffs[300:])
        res3 = CriterionResult(
            3,
            "coefficient decay",
            float(tail.max()) < 1e-14,
            f"{scale}: max |A_n| for n>300 at a=-0.65 is {tail.max():.2e} (need < 1e-14)",
        )
    return [res1, res2, res3]


def criterion_4(kinds, fast: bool) -> list[CriterionResult]:
    results = []
    for kind in (EquationKind.RO, EquationKind.MRO):
        if kind not in kinds:
            continue
        table = asymptotic_constants(kind)
        amplitudes = [0.02, 0.04, 0.08]
        errors = []
        for a in amplitudes:
            p = solve_wave(kind, a, 64)
            errors.append(abs(p.gamma - (1.0 + table.gamma_a2 * a * a)))
        slope = float(np.polyfit(np.log(amplitudes), np.log(errors), 1)[0])
        results.append(
            CriterionResult(
                4,
                f"stokes order ({kind.value})",
                abs(slope - 4.0) <= 0.3,
                f"log-log slope of |gamma_num - gamma_asym| = {slope:.3f} (need 4 +/- 0.3)",
            )
        )
    return results


def criterion_5(kinds, fast: bool) -> list[CriterionResult]:
    m = 64 if fast else 256
    results = []
    for kind in (EquationKind.RO, EquationKind.MRO):
        if kind not in kinds:
            continue
        zero = solve_wave(kind, 0.0, m)
        op = assemble(zero, 0.0)
        n = np.arange(1.0, 11.0)
        expected_l = np.repeat(-1.0 + n**-2.0, 2)
        if kind is EquationKind.RO:
            expected_m = np.repeat(1.0 - n**4, 2)
        else:
            expected_m = np.repeat(0.5 * (1.0 - n**2), 2)
        worst = 0.0
        for mat, expected in ((op.a_hat, expected_l), (op.b_hat, expected_m)):
            computed = np.sort(np.linalg.eigvalsh(mat))
            for value in expected:
                worst = max(worst, float(np.min(np.abs(computed - value))))
        results.append(
            CriterionResult(
                5,
                f"unperturbed spectra ({kind.value})",
                worst < 1e-10,
                f"M={m}: worst closed-form mismatch over first 20 of L and M "
                f"= {worst:.2e} (need < 1e-10)",
            )
        )
    return results


def criterion_6(kinds, fast: bool) -> list[CriterionResult]:
    m = 128 if fast else 256
    a = 0.05
    results = []
    for kind in (EquationKind.RO, EquationKind.MRO, EquationKind.SP):
        if kind not in kinds:
            continue
        table = asymptotic_constants(kind)
        rate_l = perturbation_eigenvalue_L(kind, a, m) / a**2
        rate_m = perturbation_eigenvalue_M(kind, a, m) / a**2
        err_l = abs(rate_l - table.split_rate_energy) / abs(table.split_rate_energy)
        err_m = abs(rate_m - table.split_rate_casimir) / abs(table.split_rate_casimir)
        results.append(
            CriterionResult(
                6,
                f"eigenvalue perturbation rates ({kind.value})",
                max(err_l, err_m) <= 0.10,
                f"M={m}, a={a}: lambda/a^2 = {rate_l:+.4f} (expect "
                f"{table.split_rate_energy:+.4f}), {rate_m:+.4f} (expect "
                f"{table.split_rate_casimir:+.4f}); worst rel err "
                f"{max(err_l, err_m):.1%} (need <= 10%)",
            )
        )
    return results


def criterion_7(kinds, fast: bool) -> list[CriterionResult]:
    m = 64 if fast else 256
    results = []
    for kind in (EquationKind.RO, EquationKind.MRO):
        if kind not in kinds:
            continue
        table = asymptotic_constants(kind)
        zero = solve_wave(kind, 0.0, m)
        curv = band_curvature(zero, table.c0, 1e-3)
        err = abs(curv - table.band_curvature0) / table.band_curvature0
        results.append(
            CriterionResult(
                7,
                f"band curvature at zero amplitude ({kind.value})",
                err <= 0.01,
                f"M={m}, dk=1e-3: curvature {curv:.4f} vs {table.band_curvature0:g} "
                f"(rel err {err:.2%}, need <= 1%)",
            )
        )
    return results


def criterion_8(kinds, fast: bool) -> list[CriterionResult]:
    if EquationKind.RO not in kinds:
        return []
    m = 128 if fast else 256
    a = 0.1
    profile = solve_wave(EquationKind.RO, a, m)
    rows = []
    worst = 0.0
    for c in (0.5, 0.55, 0.6):
        numeric = band_curvature(profile, c, 1e-3)
        reference = 2.0 * (6.0 - 2.0 * (2.0 * c - 1.0) ** 2 / a**2)
        rel = abs(numeric - reference) / abs(reference)
        worst = max(worst, rel)
        rows.append(f"c={c}: {numeric:+.2f} vs {reference:+.2f} ({rel:.0%})")
    return [
        CriterionResult(
            8,
            "band-expansion match (ro)",
            worst <= 0.15,
            f"M={m}, a={a}: " + "; ".join(rows) + " (need <= 15% each)",
        )
    ]


def criterion_9(kinds, fast: bool) -> list[CriterionResult]:
    m = 128 if fast else 256
    results = []
    for kind in (EquationKind.RO, EquationKind.MRO):
        if kind not in kinds:
            continue
        table = asymptotic_constants(kind)
        amplitudes = np.array([0.02, 0.04, 0.06, 0.08, 0.1])
        shifts = []
        profile = None
        for a in amplitudes:
            profile = solve_wave(kind, float(a), m, initial=profile)
            lo, hi = find_c_boundaries(profile, 1e-3)
            shifts.append(hi - table.c0)
        # c_+(a) carries a genuine quadratic term, so the leading slope is
        # the linear coefficient of a quadratic least-squares fit
        slope = float(np.polyfit(amplitudes, np.array(shifts), 2)[1])
        err = abs(slope - table.boundary_slope) / table.boundary_slope
        results.append(
            CriterionResult(
                9,
                f"boundary slope ({kind.value})",
                err <= 0.05,
                f"M={m}: quadratic-fit slope of c_+ - c0 over a in [0.02, 0.1] "
                f"= {slope:.4f} vs {table.boundary_slope:.4f} "
                f"(rel err {err:.1%}, need <= 5%)",
            )
        )
    if EquationKind.RO in kinds:
        profile = solve_wave(EquationKind.RO, 0.1, m)
        bounds = [find_c_boundaries(profile, dk) for dk in (1e-2, 1e-3, 1e-4)]
        spread_lo = max(b[0] for b in bounds) - min(b[0] for b in bounds)
        spread_hi = max(b[1] for b in bounds) - min(b[1] for b in bounds)
        spread = max(spread_lo, spread_hi)
        results.append(
            CriterionResult(
                9,
                "delta-kappa robustness (ro)",
                spread < 1e-3,
                f"M={m}, a=0.1: boundary spread across dk in {{1e-2, 1e-3, 1e-4}} "
                f"= {spread:.2e} (need < 1e-3); the dk=1e-2 probe carries a "
                f"physical O(dk^2) drift, adjacent members agree to "
                f"{abs(bounds[1][1] - bounds[2][1]):.1e}",
            )
        )
    return results


def criterion_10(kinds, fast: bool) -> list[CriterionResult]:
    plans = {
        EquationKind.RO: (
            ([0.1, 0.2, 0.3, 0.4, 0.5], 256, 0.5)
            if fast
            else ([0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.64], 1024, 0.64)
        ),
        EquationKind.MRO: (
            ([0.1, 0.3, 0.5, 0.7, 0.9], 256, 0.9)
            if fast
            else ([0.1, 0.3, 0.5, 0.7, 0.9, 1.1, 1.25], 1024, 1.25)
        ),
    }
    results = []
    for kind, (ladder, m, target) in plans.items():
        if kind not in kinds:
            continue
        region = scan_region(kind, ladder, 1e-3, m)
        i = int(np.argmin(np.abs(region.a_values - target)))
        ok = (
            bool(region.verified[i])
            and np.isfinite(region.c_minus[i])
            and region.c_minus[i] < region.c_plus[i]
        )
        results.append(
            CriterionResult(
                10,
                f"region extent ({kind.value})",
                ok,
                f"M={m}{' (fast)' if fast else ''}: at a={target} interval "
                f"({region.c_minus[i]:.4f}, {region.c_plus[i]:.4f}), "
                f"midpoint min eigenvalue {region.midpoint_min_lambda[i]:.2e}, "
                f"verified={bool(region.verified[i])}, method={region.method[i]}",
            )
        )
    return results


def criterion_11(kinds, fast: bool) -> list[CriterionResult]:
    if EquationKind.SP not in kinds:
        return []
    m = 128 if fast else 256
    profile = solve_wave(EquationKind.SP, 0.05, m)
    grid = np.array([0.0, 0.02, 0.05, 0.08, 0.15, 0.3, 0.5])
    chk = check_positive(profile, 2.0, grid)
    raised = False
    min_eig = math.nan
    try:
        find_c_boundaries(profile, 1e-3)
    except NoPositiveReference as exc:
        raised = True
        min_eig = exc.min_eigenvalue
    ok = (not chk.is_positive) and abs(chk.argmin_kappa) < 0.1 and raised
    return [
        CriterionResult(
            11,
            "short-pulse failure mode",
            ok,
            f"M={m}: min eigenvalue {chk.min_lambda:.3e} at kappa="
            f"{chk.argmin_kappa:g} (need negative, |kappa|<0.1); "
            f"NoPositiveReference raised={raised} (min eig {min_eig:.3e})",
        )
    ]


def _bisect_on_check(profile, c_inside, direction, grid, tol=1e-4):
    def positive(c):
        return check_positive(profile, c, grid).is_positive

    step = 0.02
    good = c_inside
    bad = None
    for _ in range(40):
        candidate = good + direction * step
        if candidate <= 0.0:
            raise ValueError("bracket left the positive-speed half line")
        if positive(candidate):
            good = candidate
            step *= 2.0
        else:
            bad = candidate
            break
    if bad is None:
        raise ValueError("no sign change found")
    lo, hi = (good, bad) if direction > 0 else (bad, good)
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if positive(mid) == (direction > 0):
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def criterion_12(kinds, fast: bool) -> list[CriterionResult]:
    if EquationKind.RO not in kinds:
        return []
    m = 128 if fast else 256
    amplitudes = (0.05, 0.1) if fast else (0.05, 0.1, 0.2)
    grid = np.array([1e-3, 5e-3, 0.02, 0.05, 0.1, 0.2, 0.35, 0.5])
    rows = []
    worst = 0.0
    table = asymptotic_constants(EquationKind.RO)
    profile = None
    for a in amplitudes:
        profile = solve_wave(EquationKind.RO, a, m, initial=profile)
        lo_p, hi_p = find_c_boundaries(profile, 1e-3)
        lo_b = _bisect_on_check(profile, table.c0, -1, grid)
        hi_b = _bisect_on_check(profile, table.c0, +1, grid)
        diff = max(abs(lo_p - lo_b), abs(hi_p - hi_b))
        worst = max(worst, diff)
        rows.append(f"a={a}: |pencil-bisection| = {diff:.1e}")
    return [
        CriterionResult(
            12,
            "cross-method oracle (ro)",
            worst < 1e-3,
            f"M={m}: " + "; ".join(rows) + " (need < 1e-3)",
        )
    ]


CRITERIA = {
    1: ("newton convergence", (EquationKind.RO,)),
    2: ("invariant conservation", (EquationKind.RO,)),
    3: ("coefficient decay", (EquationKind.RO,)),
    4: ("stokes orders", (EquationKind.RO, EquationKind.MRO)),
    5: ("unperturbed spectra", (EquationKind.RO, EquationKind.MRO)),
    6: ("eigenvalue perturbation rates", (EquationKind.RO, EquationKind.MRO, EquationKind.SP)),
    7: ("band curvatures", (EquationKind.RO, EquationKind.MRO)),
    8: ("band-expansion match", (EquationKind.RO,)),
    9: ("boundary asymptotics", (EquationKind.RO, EquationKind.MRO)),
    10: ("region extent", (EquationKind.RO, EquationKind.MRO)),
    11: ("short-pulse failure mode", (EquationKind.SP,)),
    12: ("cross-method oracle", (EquationKind.RO,)),
}


def run_criteria(kinds=None, fast: bool = False, numbers=None) -> list[CriterionResult]:
    """Run the acceptance criteria touching the selected equation kinds."""
    selected = _kinds(kinds)
    wanted = set(numbers) if numbers is not None else set(CRITERIA)
    results: list[CriterionResult] = []
    if {1, 2, 3} & wanted and EquationKind.RO in selected:
        chain = criterion_1_2_3(fast)
        results.extend(r for r in chain if r.number in wanted)
    if 4 in wanted:
        results.extend(criterion_4(selected, fast))
    if 5 in wanted:
        results.extend(criterion_5(selected, fast))
    if 6 in wanted:
        results.extend(criterion_6(selected, fast))
    if 7 in wanted:
        results.extend(criterion_7(selected, fast))
    if 8 in wanted:
        results.extend(criterion_8(selected, fast))
    if 9 in wanted:
        results.extend(criterion_9(selected, fast))
    if 10 in wanted:
        results.extend(criterion_10(selected, fast))
    if 11 in wanted:
        results.extend(criterion_11(selected, fast))
    if 12 in wanted:
        results.extend(criterion_12(selected, fast))
    return results
