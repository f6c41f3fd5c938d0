"""Command-line entry point.

Exit codes: 0 success, 1 usage, 2 parse error, 3 mathematical degeneracy.
Errors go to standard error prefixed with ``error:``.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import catalog, io
from .darboux import frame_series
from .developable import TRUST_RADIUS, build_developable, sample_mesh
from .errors import SwallowdevError
from .expr import parse_spec


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _spec(path):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    return parse_spec(text)


def _write(path, text):
    Path(path).write_text(text, encoding="utf-8", newline="\n")


def _range(lo, hi, what):
    if not hi > lo:
        raise UsageError(f"empty {what} range [{lo}, {hi}]")
    return lo, hi


def cmd_invariants(args):
    spec = _spec(args.spec)
    if args.samples < 1:
        raise UsageError("--samples must be positive")
    lo, hi = _range(args.t_min, args.t_max, "t")
    d = frame_series(spec)
    rows = io.invariant_rows(d, np.linspace(lo, hi, args.samples))
    if args.out.endswith(".json"):
        _write(args.out, io.dumps(io.invariants_json(spec.name, rows)))
    elif args.out.endswith(".csv"):
        _write(args.out, io.write_invariants(rows))
    else:
        raise UsageError("--out must end in .csv or .json")


def cmd_classify(args):
    _write(args.out, io.dumps(io.build_report(_spec(args.spec))))


def cmd_special(args):
    spec = _spec(args.spec)
    if args.samples < 2:
        raise UsageError("--samples must be at least 2")
    lo, hi = _range(args.t_min, args.t_max, "t")
    report = io.build_report(spec, shapes=True, samples=args.samples, tol=args.tol, t_range=(lo, hi))
    _write(args.out, io.dumps(report))


def cmd_develop(args):
    spec = _spec(args.spec)
    if args.nu < 2 or args.nv < 2:
        raise UsageError("--nu and --nv must be at least 2")
    d = frame_series(spec)
    dev = build_developable(d, "osculating" if args.which == "od" else "normal")
    mesh = sample_mesh(
        dev,
        _range(args.t_min, args.t_max, "t"),
        _range(args.r_min, args.r_max, "ruling"),
        args.nu,
        args.nv,
        radius=args.trust_radius,
    )
    _write(args.out, io.write_mesh(mesh))


def cmd_catalog(args):
    if args.emit:
        if args.emit not in catalog.ENTRIES:
            raise UsageError(f"unknown catalog entry {args.emit!r}; valid names: {', '.join(catalog.catalog_names())}")
        sys.stdout.write(catalog.emit(args.emit))
    else:
        for name in catalog.catalog_names():
            print(name)


def build_parser():
    p = _Parser(prog="swallowdev", description="Developable surfaces along swallowtail-type frontals.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("invariants", help="table of frame invariants and developable scalars")
    s.add_argument("--spec", required=True)
    s.add_argument("--t-min", type=float, default=-0.4)
    s.add_argument("--t-max", type=float, default=0.4)
    s.add_argument("--samples", type=int, default=81)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_invariants)

    s = sub.add_parser("classify", help="classify the developables at the origin")
    s.add_argument("--spec", required=True)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_classify)

    s = sub.add_parser("develop", help="mesh of the osculating or normal developable")
    s.add_argument("--spec", required=True)
    s.add_argument("--which", choices=("od", "nd"), required=True)
    s.add_argument("--t-min", type=float, default=-0.4)
    s.add_argument("--t-max", type=float, default=0.4)
    s.add_argument("--r-min", type=float, default=-0.5)
    s.add_argument("--r-max", type=float, default=0.5)
    s.add_argument("--nu", type=int, default=81)
    s.add_argument("--nv", type=int, default=21)
    s.add_argument("--trust-radius", type=float, default=TRUST_RADIUS)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_develop)

    s = sub.add_parser("special", help="detect cylinder and cone developables")
    s.add_argument("--spec", required=True)
    s.add_argument("--samples", type=int, default=201)
    s.add_argument("--tol", type=float, default=1e-8)
    s.add_argument("--t-min", type=float, default=-0.4)
    s.add_argument("--t-max", type=float, default=0.4)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_special)

    s = sub.add_parser("catalog", help="list or emit built-in surfaces")
    g = s.add_mutually_exclusive_group()
    g.add_argument("--list", action="store_true")
    g.add_argument("--emit", metavar="NAME")
    s.set_defaults(func=cmd_catalog)
    return p


def run(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        args.func(args)
    except UsageError as exc:
        print(f"error: usage: {exc}", file=sys.stderr)
        return 1
    except SwallowdevError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    return 0


def main():  # pragma: no cover - console entry
    sys.exit(run())


if __name__ == "__main__":  # pragma: no cover
    main()
