"""Command-line surface: build, save, and verify the library's artifacts.

Exit codes are part of the contract: 0 means success with every check
passing, 1 means the input or invocation was bad, 2 means a verification
check failed. Output files are deterministic byte for byte.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import replace

from . import io as mio
from .complexes import barycentric_subdivision
from .corpus import random_connected_two_complex
from .covers import build_cover, verify_cover
from .errors import ValidationError
from .fplinalg import check_prime
from .homology import betti_numbers
from .reporting import VerificationReport
from .resolution import resolve, verify_resolution
from .tower import build_tower, fiber_product, verify_tower_stage


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on usage errors; here 2 is reserved for failed
    verification checks, so usage problems exit 1 instead."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _print_report(report: VerificationReport, fmt: str) -> None:
    if fmt == "text":
        print(mio.report_as_text(report))
    else:
        print(json.dumps(mio.report_to_dict(report), indent=2,
                         sort_keys=True))


def _cmd_homology(args) -> int:
    check_prime(args.prime)
    k = mio.load_complex(args.input)
    betti = betti_numbers(k, args.prime)
    if args.dim is not None:
        value = betti[args.dim] if 0 <= args.dim < len(betti) else 0
        if args.report == "json":
            print(json.dumps({
                "betti": list(betti),
                "dim": args.dim,
                "prime": args.prime,
                "rank": value,
            }, sort_keys=True))
        else:
            print(f"rank {value}")
    else:
        if args.report == "json":
            print(json.dumps({"betti": list(betti), "prime": args.prime},
                             sort_keys=True))
        else:
            print("betti " + " ".join(str(b) for b in betti))
    return 0


def _cmd_cover(args) -> int:
    check_prime(args.prime)
    k = mio.load_complex(args.input)
    cover = build_cover(k, args.prime)
    report = verify_cover(cover)
    if args.out:
        mio.save_cover(cover, args.out)
        mio.save_report(report, os.path.join(args.out, "report.json"))
    _print_report(report, args.report)
    return 0 if report.passed else 2


def _cmd_resolve(args) -> int:
    check_prime(args.prime)
    k = mio.load_complex(args.input)
    stage = resolve(k, args.prime)
    if args.out:
        mio.save_resolution_stage(stage, args.out)
    _print_report(stage.report, args.report)
    return 0 if stage.report.passed else 2


def _cmd_tower(args) -> int:
    check_prime(args.prime)
    k = mio.load_complex(args.input)
    stages = build_tower(k, args.prime, args.depth)
    if args.out:
        mio.save_tower(stages, args.out)
    combined = VerificationReport(checks=tuple(
        c for stage in stages for c in stage.report.checks))
    _print_report(combined, args.report)
    return 0 if combined.passed else 2


def _cmd_pullback(args) -> int:
    f = mio.load_map(args.left)
    g = mio.load_map(args.right)
    product, to_left, to_right = fiber_product(f, g)
    out = args.out
    mio.save_complex(product, os.path.join(out, "product.json"))
    mio.save_complex(f.domain, os.path.join(out, "left_domain.json"))
    mio.save_complex(g.domain, os.path.join(out, "right_domain.json"))
    mio.save_map(to_left, os.path.join(out, "to_left.json"),
                 "product.json", "left_domain.json")
    mio.save_map(to_right, os.path.join(out, "to_right.json"),
                 "product.json", "right_domain.json")
    print(f"pullback: {product.n_vertices} vertices, "
          f"{len(product.simplices)} simplices")
    return 0


def _cmd_subdivide(args) -> int:
    k = mio.load_complex(args.input)
    sub = barycentric_subdivision(k)
    mio.save_subdivision(sub, args.out)
    print(f"subdivided: {sub.complex.n_vertices} vertices, "
          f"{len(sub.complex.simplices)} simplices")
    return 0


def _random_suite(args) -> VerificationReport:
    primes = [args.prime] if args.prime else [2, 3]
    for p in primes:
        check_prime(p)
    checks = []
    for i in range(args.count):
        base = random_connected_two_complex(args.seed + i)
        for p in primes:
            report = verify_cover(build_cover(base, p))
            checks.extend(
                replace(c, subject=f"{base.name} p={p}")
                for c in report.checks)
    return VerificationReport(checks=tuple(checks))


def _cmd_verify(args) -> int:
    if args.random:
        report = _random_suite(args)
        _print_report(report, args.report)
        return 0 if report.passed else 2
    if not args.target:
        raise ValidationError("verify needs a directory or --random")
    directory = args.target
    if os.path.exists(os.path.join(directory, "manifest.json")):
        stages = mio.load_tower(directory)
        combined = VerificationReport(checks=tuple(
            c for stage in stages
            for c in verify_tower_stage(stage).checks))
        _print_report(combined, args.report)
        return 0 if combined.passed else 2
    if os.path.exists(os.path.join(directory, "cover.json")):
        cover = mio.load_cover(directory)
        report = verify_cover(cover)
        _print_report(report, args.report)
        return 0 if report.passed else 2
    meta_path = os.path.join(directory, "stage.json")
    if not os.path.exists(meta_path):
        raise ValidationError(f"{directory} holds nothing recognizable")
    kind = mio._load(meta_path).get("kind")
    if kind == "resolution":
        stage = mio.load_resolution_stage(directory)
        report = verify_resolution(stage)
    elif kind == "tower_stage":
        stage = mio.load_tower_stage(directory)
        report = verify_tower_stage(stage)
    else:
        raise ValidationError(f"unknown stage kind {kind!r}")
    _print_report(report, args.report)
    return 0 if report.passed else 2


def _build_parser() -> _Parser:
    parser = _Parser(prog="mpres")
    sub = parser.add_subparsers(dest="command", required=True)

    def report_flag(p, default):
        p.add_argument("--report", choices=["json", "text"], default=default)

    p = sub.add_parser("homology", help="Betti numbers of a complex")
    p.add_argument("input")
    p.add_argument("--prime", type=int, required=True)
    p.add_argument("--dim", type=int, default=None)
    report_flag(p, "text")
    p.set_defaults(func=_cmd_homology)

    p = sub.add_parser("cover", help="canonical elementary abelian cover")
    p.add_argument("input")
    p.add_argument("--prime", type=int, required=True)
    p.add_argument("-o", "--out", default=None)
    report_flag(p, "json")
    p.set_defaults(func=_cmd_cover)

    p = sub.add_parser("resolve", help="one resolution stage with report")
    p.add_argument("input")
    p.add_argument("--prime", type=int, required=True)
    p.add_argument("-o", "--out", default=None)
    report_flag(p, "json")
    p.set_defaults(func=_cmd_resolve)

    p = sub.add_parser("tower", help="iterated pull-back tower")
    p.add_argument("input")
    p.add_argument("--prime", type=int, required=True)
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("-o", "--out", default=None)
    report_flag(p, "json")
    p.set_defaults(func=_cmd_tower)

    p = sub.add_parser("pullback", help="fiber product of two saved maps")
    p.add_argument("left")
    p.add_argument("right")
    p.add_argument("-o", "--out", required=True)
    p.set_defaults(func=_cmd_pullback)

    p = sub.add_parser("subdivide", help="barycentric subdivision")
    p.add_argument("input")
    p.add_argument("-o", "--out", required=True)
    p.set_defaults(func=_cmd_subdivide)

    p = sub.add_parser("verify", help="re-run checks on a saved artifact")
    p.add_argument("target", nargs="?", default=None)
    p.add_argument("--random", action="store_true",
                   help="verify covers of randomly generated complexes")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=20)
    p.add_argument("--prime", type=int, default=None)
    report_flag(p, "json")
    p.set_defaults(func=_cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValidationError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
