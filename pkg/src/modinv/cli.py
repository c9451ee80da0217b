"""Command-line front end.

Subcommands: builtin, check, modular, invariants, classify.
Exit statuses: 0 success, 1 validation/verification failure, 2 usage or
parse error, 3 node-budget exhaustion (partial results are still printed).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from typing import Optional

from .classify import classify_all
from .commutant import (
    InvariantRejected,
    SearchBudgetExceeded,
    commutant_basis,
    enumerate_invariants,
    twist_sparsity,
    verify_invariant,
)
from .fusion import builtin_cyclic, builtin_so_level1, builtin_su2, validate
from .modular import (
    DataIntegrityError,
    compute_modular_data,
    verify_statistics_axioms,
    verlinde_check,
)
from .report import build_report, render_json, render_markdown
from .ringfile import RingFileError, dump_ring, load_ring

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3

DEFAULT_NODE_BUDGET = 10_000_000


def main(argv: Optional[list[str]] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except RingFileError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InvariantRejected as exc:
        print(f"rejected: {exc}", file=sys.stderr)
        return EXIT_FAIL


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="modinv",
        description="Modular data and modular invariant coupling matrices of fusion rings",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("builtin", help="emit a built-in ring file on stdout")
    p.add_argument("family", choices=["su2", "so-level1", "cyclic"])
    p.add_argument("--level", type=int, help="level for su2")
    p.add_argument("--n", type=int, help="n for so-level1 (multiple of 16) or cyclic order")
    p.add_argument(
        "--twists",
        type=str,
        default=None,
        help="comma-separated rational twists for cyclic (default all 0)",
    )
    p.set_defaults(func=cmd_builtin)

    p = sub.add_parser("check", help="validate a ring file and its statistics axioms")
    p.add_argument("ringfile")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("modular", help="report the modular data of a ring")
    p.add_argument("ringfile")
    _common_flags(p)
    p.set_defaults(func=cmd_modular)

    p = sub.add_parser("invariants", help="enumerate modular invariant coupling matrices")
    p.add_argument("ringfile")
    _common_flags(p)
    _search_flags(p)
    p.set_defaults(func=cmd_invariants)

    p = sub.add_parser("classify", help="enumerate and classify all invariants")
    p.add_argument("ringfile")
    _common_flags(p)
    _search_flags(p)
    p.add_argument(
        "--invariant",
        type=str,
        default=None,
        help="restrict the classification to one matrix: a pool index or a JSON matrix file",
    )
    p.set_defaults(func=cmd_classify)
    return parser


def _common_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=["json", "markdown"], default="json")
    p.add_argument(
        "--numeric",
        action="store_true",
        help="permit rings without exact dims (results flagged exact-unverified)",
    )


def _search_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--bound-scale", type=Fraction, default=Fraction(1))
    p.add_argument(
        "--node-budget",
        type=int,
        default=int(os.environ.get("MODINV_NODE_BUDGET", DEFAULT_NODE_BUDGET)),
    )
    p.add_argument("--workers", type=int, default=1)


def cmd_builtin(args) -> int:
    try:
        if args.family == "su2":
            if args.level is None:
                raise ValueError("su2 requires --level")
            ring = builtin_su2(args.level)
        elif args.family == "so-level1":
            if args.n is None:
                raise ValueError("so-level1 requires --n")
            ring = builtin_so_level1(args.n)
        else:
            if args.n is None:
                raise ValueError("cyclic requires --n")
            if args.twists is None:
                twists = [Fraction(0)] * args.n
            else:
                twists = [Fraction(t.strip()) for t in args.twists.split(",")]
            ring = builtin_cyclic(args.n, twists)
    except (ValueError, ZeroDivisionError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    print(dump_ring(ring))
    return EXIT_OK


def cmd_check(args) -> int:
    ring = load_ring(args.ringfile, check_axioms=False)
    ok = True
    failures = validate(ring)
    for f in failures:
        print(f"FAIL ring axiom: {f}")
    if failures:
        ok = False
    else:
        print("PASS ring axioms")
    try:
        md = compute_modular_data(ring)
    except DataIntegrityError as exc:
        print(f"FAIL statistics axiom: {exc}")
        return EXIT_FAIL
    axiom_failures = verify_statistics_axioms(md)
    for f in axiom_failures:
        print(f"FAIL statistics axiom: {f}")
    if axiom_failures:
        ok = False
    else:
        print("PASS statistics axioms")
    if md.nondegenerate:
        v = verlinde_check(md)
        if v["ok"]:
            print(f"PASS fusion reconstruction (max deviation {v['max_deviation']:.3e})")
        else:
            print(f"FAIL fusion reconstruction: {len(v['mismatches'])} mismatches")
            ok = False
    return EXIT_OK if ok else EXIT_FAIL


def _load_and_compute(args):
    ring = load_ring(args.ringfile, check_axioms=True)
    if ring.dims is None and not args.numeric:
        raise RingFileError(
            f"{args.ringfile}: ring has no exact dims; pass --numeric to use the "
            "unverified numeric path"
        )
    return compute_modular_data(ring)


def _emit(args, report: dict) -> None:
    if args.format == "markdown":
        sys.stdout.write(render_markdown(report))
    else:
        sys.stdout.write(render_json(report))


def cmd_modular(args) -> int:
    md = _load_and_compute(args)
    report = build_report(md, pool=[])
    del report["invariants"], report["span"], report["budget_exhausted"]
    _emit(args, report)
    return EXIT_OK


def _enumerate(args, md):
    basis = commutant_basis(md, twist_sparsity(md.ring))
    try:
        pool = enumerate_invariants(
            md,
            basis,
            bound_scale=args.bound_scale,
            node_budget=args.node_budget,
            workers=args.workers,
        )
        return pool, False
    except SearchBudgetExceeded as exc:
        print(f"warning: {exc}", file=sys.stderr)
        return exc.partial, True


def cmd_invariants(args) -> int:
    md = _load_and_compute(args)
    pool, exhausted = _enumerate(args, md)
    _emit(args, build_report(md, pool, budget_exhausted=exhausted))
    return EXIT_BUDGET if exhausted else EXIT_OK


def cmd_classify(args) -> int:
    md = _load_and_compute(args)
    pool, exhausted = _enumerate(args, md)
    classifications = classify_all(md, pool)
    if args.invariant is not None:
        target = _resolve_invariant(args.invariant, md, pool)
        if target is None:
            return EXIT_FAIL
        classifications = [c for c in classifications if c.index == target]
    report = build_report(md, pool, classifications, budget_exhausted=exhausted)
    _emit(args, report)
    return EXIT_BUDGET if exhausted else EXIT_OK


def _resolve_invariant(spec: str, md, pool) -> Optional[int]:
    """Pool index from an index string or a JSON matrix file; the matrix is
    exactly verified first and must occur in the enumeration."""
    if spec.isdigit():
        i = int(spec)
        if not 0 <= i < len(pool):
            print(f"error: invariant index {i} out of range", file=sys.stderr)
            return None
        return i
    with open(spec) as fh:
        mat = json.load(fh)
    Z = verify_invariant(md, [[int(v) for v in row] for row in mat])
    for i, W in enumerate(pool):
        if W.Z == Z.Z:
            return i
    print("error: verified matrix is not in the enumerated pool", file=sys.stderr)
    return None


if __name__ == "__main__":
    sys.exit(main())
