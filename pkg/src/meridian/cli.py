"""Command-line entry point: ``meridian <command> [options]``."""

from __future__ import annotations

import argparse
import sys
from typing import List, Optional

from .experiments import (
    RunConfig,
    catenoid_table,
    critical_ratio_report,
    parse_heights,
    rows_to_text,
    verify_suite,
    willmore_table,
)
from .willmore import KVariant, ModelParams

K_VARIANTS = {"paper": KVariant.PAPER_318, "principal": KVariant.PRINCIPAL_PRODUCT}


def _global_flags(parser: argparse.ArgumentParser, suppress: bool):
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    parser.add_argument("--grid-n", type=int, default=d(801), help="grid nodes (>= 101)")
    parser.add_argument("--holder-alpha", type=float, default=d(0.5), help="Hoelder exponent")
    parser.add_argument("--k-variant", choices=sorted(K_VARIANTS), default=d("principal"),
                        help="Gauss curvature reading used in the curvature equation")
    parser.add_argument("--format", choices=("csv", "dat"), default=d("csv"))
    parser.add_argument("--workers", type=int, default=d(1), help="parallel rows")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="meridian",
        description="Catenoid and Willmore-type surfaces of revolution between two rings.",
    )
    _global_flags(parser, suppress=False)
    common = argparse.ArgumentParser(add_help=False)
    _global_flags(common, suppress=True)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("catenoid-table", parents=[common],
                       help="catenoid area versus ring distance")
    p.add_argument("--radius", type=float, default=1.5088795)
    p.add_argument("--dh", type=float, default=0.1)
    p.add_argument("--steps", type=int, default=20)
    p.add_argument("--out", default=None, help="output file (default: stdout)")

    p = sub.add_parser("willmore-table", parents=[common],
                       help="area and Willmore energy of critical surfaces")
    p.add_argument("--radius", type=float, default=1.0)
    p.add_argument("--heights", default="1.0:0.1:2.0", help="START:STEP:END, END included")
    p.add_argument("--alpha", type=float, default=0.0)
    p.add_argument("--beta", type=float, default=1.0)
    p.add_argument("--gamma", type=float, default=0.0)
    p.add_argument("--out", default=None)

    p = sub.add_parser("verify", parents=[common], help="run the verification sweeps")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--cases", type=int, default=50)

    sub.add_parser("critical-ratio", parents=[common], help="print the catenoid breakdown ratio")
    return parser


def _emit(text: str, path: Optional[str]):
    if path:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = RunConfig(grid_n=args.grid_n, alpha_holder=args.holder_alpha,
                           k_variant=K_VARIANTS[args.k_variant], workers=args.workers,
                           seed=getattr(args, "seed", 0))
    except ValueError as exc:
        parser.error(str(exc))

    if args.command == "catenoid-table":
        if args.radius <= 0 or args.dh <= 0 or args.steps < 1:
            parser.error("need --radius > 0, --dh > 0 and --steps >= 1")
        rows = catenoid_table(args.radius, args.dh, args.steps, config)
        _emit(rows_to_text(rows, willmore=False, fmt=args.format), args.out)
        return 0

    if args.command == "willmore-table":
        try:
            heights = parse_heights(args.heights)
            params = ModelParams(args.alpha, args.beta, args.gamma)
        except ValueError as exc:
            parser.error(str(exc))
        if args.beta == 0 or args.radius <= 0:
            parser.error("need --beta != 0 and --radius > 0")
        rows = willmore_table(args.radius, heights, params, config)
        _emit(rows_to_text(rows, willmore=True, fmt=args.format), args.out)
        return 0

    if args.command == "verify":
        if args.cases < 1:
            parser.error("--cases must be at least 1")
        report = verify_suite(args.seed, args.cases, config)
        sys.stdout.write("\n".join(report.lines()) + "\n")
        return report.exit_code

    sys.stdout.write(critical_ratio_report())
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
