"""Command-line front end: solve waves, emit band/region tables, validate.

All tabular output is CSV with a header row, comma separators, LF line
endings, and 17-significant-digit scientific formatting, so identical
flags produce byte-identical files.  Plotting is out of scope; ``bands``
and ``region`` can emit a gnuplot script next to the data instead.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from .bands import asymptotic_bands, compute_bands
from .core import EquationKind
from .errors import RedostError
from .positivity import scan_region
from .profile_io import format_float, read_profile, write_profile
from .solver import solve_wave

__all__ = ["main"]


def _write_lines(path, lines):
    text = "\n".join(lines) + "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", newline="\n") as handle:
            handle.write(text)


def cmd_solve(args) -> int:
    kind = EquationKind.parse(args.eq)
    profile = solve_wave(kind, args.a, args.modes, tol=args.tol)
    out = args.out or f"{kind.value}_a{args.a:+g}_m{args.modes}.wave"
    write_profile(profile, out)
    print(
        f"eq={kind.value} a={args.a:g} gamma={profile.gamma:.12g} "
        f"I={profile.invariant:.12g} iterations={profile.iterations} "
        f"residual={profile.ode_residual:.3g} "
        f"invariant_deviation={profile.invariant_deviation:.3g} -> {out}"
    )
    return 0


def cmd_bands(args) -> int:
    profile = read_profile(args.profile)
    grid = np.linspace(-0.5, 0.5, args.kgrid)
    bands = compute_bands(profile, args.c, grid, args.nbands)
    header = ["kappa"] + [f"band_{j + 1}" for j in range(args.nbands)]
    if args.asymptotic:
        header += ["lambda_gr_asym", "lambda_ex_asym"]
    lines = [",".join(header)]
    for i, kappa in enumerate(bands.kappa_grid):
        row = [format_float(kappa)] + [format_float(v) for v in bands.bands[i]]
        if args.asymptotic:
            gr, ex = asymptotic_bands(profile.kind, profile.a, args.c, float(kappa))
            row += [format_float(gr), format_float(ex)]
        lines.append(",".join(row))
    _write_lines(args.out, lines)
    if args.gnuplot and args.out:
        _write_lines(
            args.gnuplot,
            [
                "set datafile separator ','",
                "set xlabel 'kappa'",
                "set ylabel 'lambda'",
                "plot " + ", ".join(
                    f"'{args.out}' using 1:{j + 2} with lines title 'band {j + 1}'"
                    for j in range(args.nbands)
                ),
            ],
        )
    return 0


def cmd_region(args) -> int:
    kind = EquationKind.parse(args.eq)
    amplitudes = np.linspace(args.amax / args.na, args.amax, args.na)
    region = scan_region(kind, amplitudes, args.deltakappa, args.modes, jobs=args.jobs)
    lines = ["a,c_minus,c_plus,verified"]
    for i, a in enumerate(region.a_values):
        lines.append(
            ",".join(
                [
                    format_float(a),
                    format_float(region.c_minus[i]),
                    format_float(region.c_plus[i]),
                    str(int(region.verified[i])),
                ]
            )
        )
    _write_lines(args.out, lines)
    failures = [e for e in region.errors if e]
    for message in failures:
        print(f"warning: {message}", file=sys.stderr)
    if args.gnuplot and args.out:
        _write_lines(
            args.gnuplot,
            [
                "set datafile separator ','",
                "set xlabel 'c'",
                "set ylabel '|a|'",
                f"plot '{args.out}' using 2:1 with lines title 'c_-', "
                f"'{args.out}' using 3:1 with lines title 'c_+'",
            ],
        )
    return 0


def cmd_validate(args) -> int:
    from .acceptance import run_criteria

    results = run_criteria(kinds=[args.eq] if args.eq else None, fast=args.fast)
    failed = 0
    for res in results:
        print(f"[{res.label}] criterion {res.number} ({res.name}): {res.summary}")
        if res.passed is False:
            failed += 1
    print(f"{sum(r.passed is True for r in results)} passed, "
          f"{failed} failed, {sum(r.passed is None for r in results)} skipped")
    return 1 if failed else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="redost",
        description="Periodic travelling waves of the reduced Ostrovsky "
        "equations and their orbital-stability certificates.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="compute one wave profile")
    p_solve.add_argument("--eq", required=True, choices=["ro", "mro", "sp"])
    p_solve.add_argument("--a", type=float, required=True, help="fundamental amplitude")
    p_solve.add_argument("--modes", type=int, required=True, help="cosine truncation M")
    p_solve.add_argument("--tol", type=float, default=1e-15)
    p_solve.add_argument("--out", default=None, help="profile file path")
    p_solve.set_defaults(func=cmd_solve)

    p_bands = sub.add_parser("bands", help="Floquet-Bloch band table for a profile")
    p_bands.add_argument("--profile", required=True)
    p_bands.add_argument("--c", type=float, required=True, help="speed parameter")
    p_bands.add_argument("--nbands", type=int, required=True)
    p_bands.add_argument("--kgrid", type=int, default=201)
    p_bands.add_argument("--asymptotic", action="store_true",
                         help="append small-amplitude expansion columns")
    p_bands.add_argument("--out", default=None, help="CSV path (default stdout)")
    p_bands.add_argument("--gnuplot", default=None, help="write a gnuplot script here")
    p_bands.set_defaults(func=cmd_bands)

    p_region = sub.add_parser("region", help="positivity-region table c_-(a), c_+(a)")
    p_region.add_argument("--eq", required=True, choices=["ro", "mro"])
    p_region.add_argument("--amax", type=float, required=True)
    p_region.add_argument("--na", type=int, required=True)
    p_region.add_argument("--deltakappa", type=float, default=1e-3)
    p_region.add_argument("--modes", type=int, default=256)
    p_region.add_argument("--jobs", type=int, default=None,
                          help="worker count (default: OSTROVSKY_JOBS or all cores)")
    p_region.add_argument("--out", default=None, help="CSV path (default stdout)")
    p_region.add_argument("--gnuplot", default=None, help="write a gnuplot script here")
    p_region.set_defaults(func=cmd_region)

    p_val = sub.add_parser("validate", help="run the acceptance criteria")
    p_val.add_argument("--eq", default=None, choices=["ro", "mro", "sp"],
                       help="restrict to criteria touching one equation")
    p_val.add_argument("--fast", action="store_true",
                       help="desk-scale mode counts; full-scale-only checks are skipped")
    p_val.set_defaults(func=cmd_validate)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except RedostError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
