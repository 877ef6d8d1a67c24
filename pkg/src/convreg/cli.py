"""Command-line entry point.

Exit codes: 0 success, 1 parse or usage error, 2 empty intersection,
3 unsupported norm/mode/set combination.
"""
from __future__ import annotations

import argparse
import os
import sys
from fractions import Fraction

from . import io as cio
from .chip import chip_reports
from .constants import DEFAULT_DELTA_GRID, DEFAULT_TOL, compute_constants
from .errors import ConvRegError, EmptySetError, InstanceError, NotMemberError, UnsupportedError
from .sets import inverse_sum
from .theorems import DESCRIPTIONS, THEOREMS, VerifyParams, cyclic_projection, verify

EXIT_OK, EXIT_USAGE, EXIT_EMPTY, EXIT_UNSUPPORTED = 0, 1, 2, 3
COMMANDS = ("constants", "chip", "verify", "cyclic", "inverse-sum")
# commands that inflate sets by the unit ball and so need a polyhedral ball in exact mode;
# the shrinking interval family is exempt because its constants are analytic
INFLATION_COMMANDS = ("constants", "verify")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"invalid rational {text!r}") from None


def _rational_list(text: str) -> tuple:
    return tuple(_rational(t) for t in text.split(",") if t.strip())


def _positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid integer {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="convreg", description="Regularity constants and CHIP analysis of convex sets.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("instance", help="instance file (JSON)")
    p.add_argument("--tol", type=_rational, default=DEFAULT_TOL, help="bisection tolerance")
    p.add_argument("--samples", type=_positive_int, default=None, help="sample count (default: instance)")
    p.add_argument("--seed", type=int, default=None, help="random seed (default: instance)")
    p.add_argument("--delta-grid", type=_rational_list, default=DEFAULT_DELTA_GRID,
                   help="comma-separated delta values for the uniform normality constant")
    p.add_argument("--rho", type=_rational, default=None, help="restrict regularity samples to rho*B")
    p.add_argument("--theorems", default="all", help="comma-separated theorem ids, or 'all'")
    p.add_argument("--point", type=_rational_list, action="append", default=[],
                   help="comma-separated point (repeatable)")
    p.add_argument("--start", type=_rational_list, default=None, help="cyclic projection start point")
    p.add_argument("--cycles", type=_positive_int, default=50)
    p.add_argument("--parallel", action="store_true", help="parallel sampling (same output)")
    p.add_argument("--out", default=".", help="output directory")
    return p


def _write(out_dir: str, name: str, text: str) -> str:
    os.makedirs(out_dir, exist_ok=True)
    path = os.path.join(out_dir, name)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    return path


def run(args) -> int:
    inst = cio.parse_instance(args.instance)
    c = inst.collection
    seed = inst.seed if args.seed is None else args.seed
    samples = inst.samples if args.samples is None else args.samples
    points = tuple(args.point) or inst.points
    for pt in points:
        if len(pt) != c.dim:
            raise InstanceError(f"point has {len(pt)} entries, dimension is {c.dim}", None, "--point")
    if (args.command in INFLATION_COMMANDS and c.norm.kind == "l2" and c.norm.mode == "exact"
            and not c.is_infinite):
        raise UnsupportedError(
            f"command '{args.command}' inflates sets by the unit ball; norm kind 'l2' with "
            "mode 'exact' has no polyhedral ball (use l1/linf, or mode 'float')"
        )

    if args.command == "constants":
        report = compute_constants(c, args.tol, samples, seed, args.delta_grid, args.rho,
                                   args.parallel, points)
        text = cio.constants_csv(c, report)
        _write(args.out, "constants.csv", text)
    elif args.command == "chip":
        reports = chip_reports(c, points, seed=seed, samples=samples)
        text = cio.chip_csv(c, reports)
        _write(args.out, "chip.csv", text)
    elif args.command == "verify":
        ids = list(THEOREMS) if args.theorems == "all" else [t.strip() for t in args.theorems.split(",")]
        unknown = [t for t in ids if t not in THEOREMS]
        if unknown:
            raise InstanceError(f"unknown theorem id(s): {', '.join(unknown)}", None, "--theorems")
        params = VerifyParams(args.tol, samples, seed, tuple(args.delta_grid), points)
        reports = [verify(t, c, params) for t in ids]
        text = cio.theorems_md(c, reports, DESCRIPTIONS)
        _write(args.out, "theorems.md", text)
    elif args.command == "cyclic":
        start = args.start if args.start is not None else (points[0] if points else None)
        if start is None:
            raise InstanceError("cyclic needs --start or a point of interest", None, "--start")
        if len(start) != c.dim:
            raise InstanceError(f"start has {len(start)} entries, dimension is {c.dim}", None, "--start")
        traj = cyclic_projection(c, start, args.cycles)
        text = cio.trajectory_csv(traj)
        _write(args.out, "trajectory.csv", text)
    else:
        if len(c.sets) < 2:
            raise InstanceError("inverse-sum needs at least two sets", None, "sets")
        result = inverse_sum(c.sets[0], c.sets[1])
        text = cio.dumps_json(cio.set_to_dict(result))
        _write(args.out, "inverse_sum.json", text)
    sys.stdout.write(text)
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return run(args)
    except EmptySetError as exc:
        print(f"convreg: empty intersection: {exc}", file=sys.stderr)
        return EXIT_EMPTY
    except UnsupportedError as exc:
        print(f"convreg: unsupported: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except (InstanceError, NotMemberError) as exc:
        print(f"convreg: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ConvRegError, ValueError) as exc:
        print(f"convreg: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
