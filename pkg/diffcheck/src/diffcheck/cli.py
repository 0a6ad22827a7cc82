"""diffcheck command line: compare a source network with its migration."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .errors import DiffcheckError
from .mad import DEFAULT_BATCH, DEFAULT_TRIALS, mad_compare


def build_parser():
    parser = argparse.ArgumentParser(
        prog="diffcheck",
        description="Copy weights from a source network to its migrated "
                    "counterpart and report max-absolute-difference "
                    "statistics over seeded random inputs.")
    parser.add_argument("--src", required=True, help="source network file")
    parser.add_argument("--dst", required=True, help="migrated network file")
    parser.add_argument("--shape", default=None, metavar="CSV",
                        help="input shape, batch implied (e.g. 32,32,3); "
                             "defaults to the files' INPUT_SHAPE")
    parser.add_argument("--trials", type=int, default=DEFAULT_TRIALS)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--batch", type=int, default=DEFAULT_BATCH)
    parser.add_argument("--tol", type=float, default=None,
                        help="exit 1 when max MAD exceeds this tolerance")
    parser.add_argument("--json", default=None, metavar="REPORT",
                        help="write the full report as JSON")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    shape = None
    if args.shape:
        shape = tuple(int(p) for p in args.shape.split(",") if p.strip())
    try:
        report = mad_compare(args.src, args.dst, input_shape=shape,
                             trials=args.trials, seed=args.seed,
                             batch_size=args.batch)
    except DiffcheckError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if args.json:
        Path(args.json).write_text(report.to_json(), encoding="utf-8")
    print(f"{report.network} {report.direction} trials={report.trials} "
          f"seed={report.seed} inputs={report.input_kind} "
          f"max_mad={report.max_mad:.3e}")
    if args.tol is not None and report.max_mad > args.tol:
        print(f"max MAD {report.max_mad:.3e} exceeds tolerance "
              f"{args.tol:.3e}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
