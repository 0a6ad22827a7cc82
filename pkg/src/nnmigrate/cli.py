"""Command-line entry point wiring the migration pipeline with diagnostics.

Exit codes: 0 on success, 1 when --strict and advisory diagnostics were
produced, 2 on errors. Outputs are written atomically (temp file + rename);
no partial files are left behind on error.
"""

from __future__ import annotations

import argparse
import os
import sys
import tempfile
from pathlib import Path

from .api import migrate_source
from .codegen import EmitTarget
from .diagnostics import (
    MigrationError, MissingInputFileError, OutputWriteError,
)
from .pivot.serialize import serialize
from . import registry as R

_FRAMEWORKS = {"tf": R.TF, "pt": R.PT}
_STYLES = {"seq": R.SEQUENTIAL, "subc": R.SUBCLASSING}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nnmigrate",
        description="Migrate neural-network definition code between the "
                    "channel-last (tf) and channel-first (pt) dialects, in "
                    "Sequential or Subclassing style.")
    parser.add_argument("inputs", nargs="+", help="source file(s) to migrate")
    parser.add_argument("--from", dest="from_fw", default="auto",
                        choices=["tf", "pt", "auto"],
                        help="source framework (default: auto-detect)")
    parser.add_argument("--from-style", dest="from_style", default="auto",
                        choices=["seq", "subc", "auto"],
                        help="source style (default: auto-detect)")
    parser.add_argument("--to", dest="to_fw", required=True,
                        choices=["tf", "pt"], help="target framework")
    parser.add_argument("--to-style", dest="to_style", required=True,
                        choices=["seq", "subc"], help="target style")
    parser.add_argument("--input-shape", default=None, metavar="CSV",
                        help="input shape, batch implied (e.g. 32,32,3)")
    parser.add_argument("--emit-training", action="store_true", default=None,
                        help="emit the train/evaluate scaffold (default: on "
                             "when the source carries a training config)")
    parser.add_argument("--no-emit-training", dest="emit_training",
                        action="store_false", help=argparse.SUPPRESS)
    parser.add_argument("--dump-pivot", action="store_true",
                        help="also write the pivot model as <output>.nn.json")
    parser.add_argument("--strict", action="store_true",
                        help="exit 1 when advisory diagnostics are produced")
    parser.add_argument("-o", "--output", default=None,
                        help="output file (or directory in batch mode)")
    return parser


def _parse_shape(raw: str | None):
    if raw is None:
        return None
    try:
        dims = tuple(int(part) for part in raw.split(",") if part.strip())
    except ValueError:
        raise MigrationError(f"malformed --input-shape '{raw}'") from None
    if not dims or any(d < 1 for d in dims):
        raise MigrationError(f"malformed --input-shape '{raw}'")
    return dims


def _output_path(input_path: Path, target: EmitTarget, output, batch: bool) -> Path:
    if output is None:
        return input_path.with_name(
            f"{input_path.stem}_{target.framework}_{target.style}.py")
    out = Path(output)
    if batch or out.is_dir():
        return out / f"{input_path.stem}_{target.framework}_{target.style}.py"
    return out


def _atomic_write(path: Path, data: bytes):
    path.parent.mkdir(parents=True, exist_ok=True)
    try:
        fd, tmp = tempfile.mkstemp(dir=str(path.parent),
                                   prefix=f".{path.name}.", suffix=".tmp")
        with os.fdopen(fd, "wb") as handle:
            handle.write(data)
        os.replace(tmp, path)
    except OSError as exc:
        raise OutputWriteError(f"cannot write '{path}': {exc}") from exc


def _print_diags(diags, path):
    for d in diags:
        print(d.render(str(path)), file=sys.stderr)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    target = EmitTarget(_FRAMEWORKS[args.to_fw], _STYLES[args.to_style])
    source_fw = None if args.from_fw == "auto" else _FRAMEWORKS[args.from_fw]
    source_style = (None if args.from_style == "auto"
                    else _STYLES[args.from_style])
    batch = len(args.inputs) > 1

    exit_code = 0
    for raw_path in args.inputs:
        path = Path(raw_path)
        try:
            shape = _parse_shape(args.input_shape)
            if not path.is_file():
                raise MissingInputFileError(f"input file '{path}' not found")
            text = path.read_text(encoding="utf-8")
            result = migrate_source(
                text, target,
                source_framework=source_fw, source_style=source_style,
                input_shape=shape, emit_training=args.emit_training)
            out_path = _output_path(path, target, args.output, batch)
            _atomic_write(out_path, result.text.encode("utf-8"))
            if args.dump_pivot:
                pivot_path = out_path.parent / (out_path.stem + ".nn.json")
                _atomic_write(pivot_path, serialize(result.filled_pivot))
            _print_diags(result.notes, path)
            print(f"{path} [{result.source_dialect.framework}/"
                  f"{result.source_dialect.style}] -> {out_path} "
                  f"[{target.framework}/{target.style}]")
            if result.notes and args.strict:
                exit_code = max(exit_code, 1)
        except MigrationError as exc:
            _print_diags(exc.diagnostics, path)
            exit_code = 2
    return exit_code


if __name__ == "__main__":
    sys.exit(main())
