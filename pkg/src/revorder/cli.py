"""Command-line front end.

Exit codes: 0 success, 2 infeasible plan, 3 I/O or parse error, 4 internal
inconsistency (equivalent criteria disagree, or a reference fixture fails).
"""
import argparse
import json
import os
import sys

import numpy as np

from .errors import PlanInfeasible, RevorderError
from .fixtures import run_fixtures
from .matcore import COMPLEX, REAL, fro_norm, read_matrix, write_matrix
from .rolkit import (
    construct_pair_12,
    construct_pair_123,
    construct_pair_124,
    construct_pair_rol,
    construct_pair_zero,
    full_report,
)
from .svdkit import compute_svd, random_reparametrization

EXIT_OK = 0
EXIT_INFEASIBLE = 2
EXIT_IO = 3
EXIT_INCONSISTENT = 4

KINDS = ("rol", "cls12", "cls123", "cls124", "zero")


class CliError(Exception):
    def __init__(self, code, message):
        super().__init__(message)
        self.code = code


def _positive_float(text):
    x = float(text)
    if not x > 0:
        raise argparse.ArgumentTypeError(f"must be positive, got {text}")
    return x


def _int_tuple(size):
    def parse(text):
        try:
            vals = tuple(int(t) for t in text.split(","))
        except ValueError:
            raise argparse.ArgumentTypeError(f"expected {size} comma-separated integers")
        if len(vals) != size:
            raise argparse.ArgumentTypeError(f"expected {size} comma-separated integers")
        return vals
    return parse


def _add_globals(p, suppress):
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    p.add_argument("--tol", type=_positive_float, default=d(1e-8), help="residual tolerance")
    p.add_argument("--angle-tol", type=_positive_float, default=d(1e-7), help="angle tolerance (radians)")
    p.add_argument("--seed", type=int, default=d(0))
    p.add_argument("--format", choices=("json", "csv"), default=d("json"), help="matrix file format")
    p.add_argument("--field", choices=(REAL, COMPLEX), default=d(REAL))


def build_parser():
    parser = argparse.ArgumentParser(
        prog="revorder",
        description="Reverse-order law for Moore-Penrose pseudoinverses of products.",
    )
    _add_globals(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="construct a pair (A, B) of a chosen class")
    _add_globals(g, suppress=True)
    g.add_argument("kind", choices=KINDS)
    g.add_argument("--dims", type=_int_tuple(3), required=True, help="m,n,k")
    g.add_argument("--ranks", type=_int_tuple(2), required=True, help="rA,rB")
    g.add_argument("--N", type=int, default=0, help="dimension of range(A*) ∩ range(B)")
    g.add_argument("--out", default=".", help="output directory")

    c = sub.add_parser("check", help="classify a pair read from files")
    _add_globals(c, suppress=True)
    c.add_argument("A")
    c.add_argument("B")

    s = sub.add_parser("svd-family", help="emit reparametrized SVDs of a matrix as JSON lines")
    _add_globals(s, suppress=True)
    s.add_argument("A")
    s.add_argument("--count", type=int, default=3)

    r = sub.add_parser("repro", help="rerun the reference examples")
    _add_globals(r, suppress=True)
    return parser


def _dump(obj):
    return json.dumps(obj, indent=2, sort_keys=True)


def _read(path, field):
    # --field complex embeds real data; the real default keeps each file's own field
    try:
        return read_matrix(path, COMPLEX if field == COMPLEX else None)
    except (OSError, RevorderError, ValueError) as exc:
        raise CliError(EXIT_IO, f"cannot read {path}: {exc}")


_BUILDERS = {
    "rol": construct_pair_rol,
    "cls12": construct_pair_12,
    "cls123": construct_pair_123,
    "cls124": construct_pair_124,
}


def _build(kind, dims, ranks, N, seed, field):
    if kind == "zero":
        return construct_pair_zero(dims, ranks, seed, field)
    return _BUILDERS[kind](dims, ranks, N, seed, field)


def _achieved(kind, report):
    """(positive class reached, no stronger class than requested)."""
    cls = report.classes
    full = report.rol.penrose_class.satisfied == frozenset({1, 2, 3, 4})
    if kind in ("rol", "zero"):
        return full, True
    if kind == "cls12":
        return cls.is12, not (cls.is123 or cls.is124)
    if kind == "cls123":
        return cls.is123, not cls.is124
    return cls.is124, not cls.is123


def cmd_generate(args, out=None):
    out = out or sys.stdout
    if args.format == "csv" and args.field == COMPLEX:
        raise CliError(EXIT_IO, "csv output holds real matrices only")
    seed = args.seed
    redrawn = False
    try:
        A, B = _build(args.kind, args.dims, args.ranks, args.N, seed, args.field)
        rep = full_report(A, B, args.tol, args.angle_tol)
        ok, strict = _achieved(args.kind, rep)
        if ok and not strict and args.kind not in ("rol", "zero") and args.N > 0:
            # landed in the non-generic set where a stronger class holds: draw once more
            seed += 1
            redrawn = True
            A, B = _build(args.kind, args.dims, args.ranks, args.N, seed, args.field)
            rep = full_report(A, B, args.tol, args.angle_tol)
            ok, strict = _achieved(args.kind, rep)
    except PlanInfeasible as exc:
        raise CliError(EXIT_INFEASIBLE, f"infeasible: {exc}")
    ext = args.format
    try:
        os.makedirs(args.out, exist_ok=True)
        write_matrix(os.path.join(args.out, f"A.{ext}"), A, ext)
        write_matrix(os.path.join(args.out, f"B.{ext}"), B, ext)
        doc = {
            "kind": args.kind,
            "dims": list(args.dims),
            "ranks": list(args.ranks),
            "N": args.N,
            "seed": seed,
            "redrawn": redrawn,
            "field": args.field,
            "achieved": bool(ok),
            "strict": bool(strict),
            "report": rep.to_dict(),
        }
        with open(os.path.join(args.out, "report.json"), "w") as fh:
            fh.write(_dump(doc) + "\n")
    except OSError as exc:
        raise CliError(EXIT_IO, f"cannot write output: {exc}")
    print(_dump({"achieved": bool(ok), "strict": bool(strict), "seed": seed, "out": args.out}), file=out)
    return EXIT_OK if ok else EXIT_INCONSISTENT


def cmd_check(args, out=None):
    out = out or sys.stdout
    A = _read(args.A, args.field)
    B = _read(args.B, args.field)
    try:
        rep = full_report(A, B, args.tol, args.angle_tol)
    except RevorderError as exc:
        raise CliError(EXIT_IO, str(exc))
    print(_dump(rep.to_dict()), file=out)
    return EXIT_OK if rep.consistent() else EXIT_INCONSISTENT


def cmd_svd_family(args, out=None):
    out = out or sys.stdout
    A = _read(args.A, args.field)
    if args.count < 0:
        raise CliError(EXIT_IO, "--count must be nonnegative")
    base = compute_svd(A)
    rng = np.random.default_rng(args.seed)
    for i in range(args.count):
        s = random_reparametrization(base, rng)
        line = {
            "index": i,
            "reconstruction_error": fro_norm(s.reconstruct() - A),
            "svd": s.to_dict(),
        }
        print(json.dumps(line, sort_keys=True), file=out)
    return EXIT_OK


def cmd_repro(args, out=None):
    out = out or sys.stdout
    results = run_fixtures(args.tol, args.angle_tol, args.field)
    for r in results:
        print(r.row(), file=out)
    passed = sum(r.passed for r in results)
    print(f"{passed}/{len(results)} fixtures passed", file=out)
    return EXIT_OK if passed == len(results) else EXIT_INCONSISTENT


COMMANDS = {
    "generate": cmd_generate,
    "check": cmd_check,
    "svd-family": cmd_svd_family,
    "repro": cmd_repro,
}


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except CliError as exc:
        print(f"revorder: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
