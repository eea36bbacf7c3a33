"""``nc`` command line: compute, sweep, figure, verify.

Exit codes: 0 success, 1 verification failure, 2 usage, parse or evaluation
error (reported as JSON on stderr).
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

from . import __version__
from .compute import compute
from .errors import NcError
from .quadrature import DEFAULT_TOL
from .sweep import FIGURES, SweepSpec, figure_series, rows_to_csv, rows_to_json, run_sweep
from .verify import CHECKS, format_table, run_verify

EXIT_OK, EXIT_VERIFY_FAILED, EXIT_USAGE = 0, 1, 2

GLOBAL_DEFAULTS = {"dim": None, "tol": DEFAULT_TOL, "out": "./out", "format": "csv"}


def _dim(text: str):
    if text == "auto":
        return None
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer or 'auto', got {text!r}") from None
    if value < 8:
        raise argparse.ArgumentTypeError("dimension must be at least 8")
    return value


def _positive_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}") from None
    if not (value > 0 and math.isfinite(value)):
        raise argparse.ArgumentTypeError("tolerance must be positive and finite")
    return value


def _global_flags() -> argparse.ArgumentParser:
    # SUPPRESS keeps a flag given before the subcommand from being reset by
    # the subparser's own default
    p = argparse.ArgumentParser(add_help=False)
    s = argparse.SUPPRESS
    p.add_argument("--dim", type=_dim, default=s, help="Fock truncation, or 'auto' (default: auto)")
    p.add_argument("--tol", type=_positive_float, default=s, help=f"quadrature tolerance (default: {DEFAULT_TOL:g})")
    p.add_argument("--out", default=s, help="directory for figure datasets (default: ./out)")
    p.add_argument("--format", choices=("csv", "json"), default=s, help="output format (default: csv)")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _global_flags()
    parser = argparse.ArgumentParser(
        prog="nc",
        description="Wehrl-entropy nonclassicality of single-mode states.",
        parents=[common],
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compute", parents=[common], help="N_w of one state expression (JSON)")
    p.add_argument("expression", help='state expression, e.g. "A^2 S(0.5) vac"')

    p = sub.add_parser("sweep", parents=[common], help="N_w along a one-parameter family")
    p.add_argument("template", help='expression with one "{}" placeholder, e.g. "S({}) vac"')
    p.add_argument("--start", type=float, required=True)
    p.add_argument("--stop", type=float, required=True)
    p.add_argument("--count", type=int, required=True)

    p = sub.add_parser("figure", parents=[common], help="write the datasets behind a figure")
    p.add_argument("ids", nargs="+", choices=sorted(FIGURES) + ["all"], metavar="ID",
                   help=f"figure id: {', '.join(sorted(FIGURES))} or all")

    p = sub.add_parser("verify", parents=[common], help="run the self-check suite")
    p.add_argument("--check", action="append", choices=sorted(CHECKS), metavar="NAME",
                   help="run only this check (repeatable); default: all")
    return parser


def _error(err: NcError, stream) -> int:
    stream.write(json.dumps({"error": err.to_dict()}, sort_keys=True) + "\n")
    return EXIT_USAGE


def _json_default(obj):
    if hasattr(obj, "item"):
        return obj.item()
    raise TypeError(f"not JSON serializable: {type(obj).__name__}")


def cmd_compute(args, out) -> int:
    result = compute(args.expression, args.dim, args.tol)
    out.write(json.dumps(result.to_dict(), indent=2, sort_keys=True, default=_json_default) + "\n")
    return EXIT_OK


def cmd_sweep(args, out) -> int:
    spec = SweepSpec(args.template, args.start, args.stop, args.count, args.dim, args.tol)
    rows = run_sweep(spec)
    out.write(rows_to_json(rows) if args.format == "json" else rows_to_csv(rows))
    return EXIT_OK


def cmd_figure(args, out) -> int:
    ids = sorted(FIGURES) if "all" in args.ids else list(dict.fromkeys(args.ids))
    folder = Path(args.out)
    folder.mkdir(parents=True, exist_ok=True)
    for fig_id in ids:
        for label, spec in figure_series(fig_id, args.dim, args.tol):
            rows = run_sweep(spec)
            path = folder / f"{label}.{args.format}"
            text = rows_to_json(rows) if args.format == "json" else rows_to_csv(rows)
            with open(path, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
            out.write(f"{path}\n")
    return EXIT_OK


def cmd_verify(args, out) -> int:
    results = run_verify(args.dim, args.tol, args.check)
    if args.format == "json":
        payload = [{"name": r.name, "passed": r.passed, "detail": r.detail} for r in results]
        out.write(json.dumps(payload, indent=2) + "\n")
    else:
        out.write(format_table(results))
    return EXIT_OK if all(r.passed for r in results) else EXIT_VERIFY_FAILED


COMMANDS = {"compute": cmd_compute, "sweep": cmd_sweep, "figure": cmd_figure, "verify": cmd_verify}


def main(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    for key, value in GLOBAL_DEFAULTS.items():
        if not hasattr(args, key):
            setattr(args, key, value)
    try:
        return COMMANDS[args.command](args, stdout)
    except NcError as err:
        return _error(err, stderr)


if __name__ == "__main__":
    sys.exit(main())
