"""Command-line front end.

Exit codes: 0 success (``diagram check``: equivalent), 1 ``diagram check``
found a difference, 2 unreadable or malformed input, 3 dimension
inconsistency, 4 Kraus form requested for a map that is not completely
positive. Structured output goes to stdout, diagnostics to stderr.
"""

import argparse
import os
import sys

from . import __version__, channels, fileio
from .diagram import DiagramSyntaxError, DiagramTypeError, equivalent, parse
from .errors import ArgumentError, DimensionError, PropertyError
from .linalg import Tol

EXIT_DIFFER = 1
EXIT_FORMAT = 2
EXIT_DIMENSION = 3
EXIT_NOT_CPP = 4


def _default_seed():
    raw = os.environ.get("CHOISCOPE_SEED")
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise SystemExit(f"choiscope: CHOISCOPE_SEED must be an integer, got {raw!r}") from None


def _tol(args):
    return Tol(rel=args.tol, abs=args.abs_tol)


def _fail(code, message):
    print(f"choiscope: {message}", file=sys.stderr)
    return code


def _load(args):
    return fileio.read_channel(args.path, normalized=args.normalized)


def cmd_analyze(args):
    c = _load(args)
    tol = _tol(args)
    report = channels.property_report(
        c, tol, pp_restarts=args.pp_restarts, seed=args.seed, max_iters=args.pp_iters, workers=args.workers
    )
    doc = fileio.encode_report(report, __version__, args.seed, tol, args.pp_restarts)
    sys.stdout.write(fileio.dumps(doc))
    return 0


def cmd_convert(args):
    c = _load(args)
    try:
        doc = fileio.encode_channel(c, args.to, _tol(args))
    except PropertyError as exc:
        return _fail(EXIT_NOT_CPP, f"cannot produce Kraus operators: {exc}")
    sys.stdout.write(fileio.dumps(doc))
    return 0


def cmd_diagram_check(args):
    env = fileio.read_env(args.env) if args.env else None
    for label, text in (("lhs", args.lhs), ("rhs", args.rhs)):
        try:
            parse(text)
        except DiagramSyntaxError as exc:
            return _fail(EXIT_FORMAT, f"{label}: {exc}\n{exc.caret()}")
    try:
        verdict = equivalent(args.lhs, args.rhs, env, _tol(args), strict_wires=args.strict_wires)
    except (DiagramTypeError, DimensionError) as exc:
        return _fail(EXIT_DIMENSION, str(exc))
    word = "EQUIVALENT" if verdict.equivalent else "DIFFER"
    print(f"{word} max_abs_diff={verdict.max_abs_diff:.6e}")
    return 0 if verdict.equivalent else EXIT_DIFFER


def build_parser():
    parser = argparse.ArgumentParser(prog="choiscope", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"choiscope {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_tol(p):
        p.add_argument("--tol", type=float, default=1e-9, help="relative tolerance (default 1e-9)")
        p.add_argument("--abs-tol", type=float, default=1e-12, help="absolute tolerance floor (default 1e-12)")

    def add_channel(p):
        p.add_argument("path", help="channel file (JSON)")
        p.add_argument("--normalized", action="store_true", help="Choi data is scaled to unit trace (J / dim_in)")
        add_tol(p)

    p = sub.add_parser("analyze", help="report HP/PP/CPP/TP/unital verdicts for a channel")
    add_channel(p)
    p.add_argument("--pp-restarts", type=int, default=32)
    p.add_argument("--pp-iters", type=int, default=200)
    p.add_argument("--seed", type=int, default=_default_seed())
    p.add_argument("--workers", type=int, default=None, help="threads for see-saw restarts")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("convert", help="convert a channel to another representation")
    add_channel(p)
    p.add_argument("--to", choices=("choi", "superop", "kraus"), required=True)
    p.set_defaults(func=cmd_convert)

    p = sub.add_parser("diagram", help="diagram expression tools")
    dsub = p.add_subparsers(dest="diagram_command", required=True)
    q = dsub.add_parser("check", help="check two expressions for equality")
    q.add_argument("lhs")
    q.add_argument("rhs")
    q.add_argument("--env", help="environment file binding named boxes")
    q.add_argument(
        "--strict-wires",
        action="store_true",
        help="require identical wire lists, not just equal total dimensions",
    )
    add_tol(q)
    q.set_defaults(func=cmd_diagram_check)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except fileio.FormatError as exc:
        return _fail(EXIT_FORMAT, str(exc))
    except DimensionError as exc:
        return _fail(EXIT_DIMENSION, str(exc))
    except (ArgumentError, PropertyError) as exc:
        return _fail(EXIT_FORMAT, str(exc))


if __name__ == "__main__":
    sys.exit(main())
