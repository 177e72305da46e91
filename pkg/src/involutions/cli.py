"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 usage or validation error,
3 degenerate input.  Results go to stdout; diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .bertini import (
    CORRUPTIONS,
    DegeneratePoint,
    PencilSpec,
    ProjPoint,
    SpecNotConcrete,
    apply_bertini,
    build_bundle,
    random_spec,
)
from .geiser import SpecNotGeiser, anticanonical_map, build_geiser, geiser_apply, geiser_ram
from .ring import GF, MERSENNE61, QQ, UNPRIMED, canonical_text
from .sigma2 import ChartUndefined, cone_map, ram_closed_form, sigma2_chart
from .verify import DEFAULT_MEM_BUDGET, SUITES, HashRNG, run_suite

BERTINI_NAMES = (
    "w", "wp", "A1", "A2", "B1", "B2", "B3", "C1", "C2", "kappa", "gamma4", "rp1", "rp3",
    "r1", "r2", "r3", "C5", "phi6", "psi6", "z1", "z2", "z3", "K",
)
GEISER_ONLY = ("gamma1", "rt_p1", "rt_p3", "rt1", "rt2", "rt3", "Ct", "phi3", "psi3", "Kt")


class UsageError(Exception):
    pass


class Degenerate(Exception):
    pass


# input


def load_pencil(path: str) -> PencilSpec:
    """Read a pencil file; values are exact strings, never JSON numbers."""
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read pencil file: {exc}") from None
    if not isinstance(doc, dict):
        raise UsageError("pencil file must hold a JSON object")
    dom = QQ
    if "field" in doc:
        prime = (doc["field"] or {}).get("prime")
        if not isinstance(prime, str):
            raise UsageError('"field" needs {"prime": "<string>"}')
        try:
            dom = GF(int(prime))
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    values = {}
    for block, suffix in (("w", ""), ("wp", "p")):
        entries = doc.get(block)
        if not isinstance(entries, dict):
            raise UsageError(f'missing block "{block}"')
        for key in UNPRIMED:
            if key not in entries:
                raise UsageError(f'block "{block}" lacks "{key}"')
            raw = entries[key]
            if not isinstance(raw, str):
                raise UsageError(f'{block}.{key} must be a string such as "3/4"')
            try:
                values[key + suffix] = dom.scalar(Fraction(raw.strip()))
            except (ValueError, ZeroDivisionError):
                raise UsageError(f"{block}.{key}: not a rational: {raw!r}") from None
    return PencilSpec.concrete(values, dom)


def parse_point(text: str, dom) -> ProjPoint:
    parts = text.split(",")
    if len(parts) != 3:
        raise UsageError("a point needs three comma-separated coordinates")
    try:
        coords = [dom.scalar(Fraction(p.strip())) for p in parts]
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"bad point {text!r}") from None
    try:
        return ProjPoint.of(coords, dom)
    except DegeneratePoint:
        raise UsageError("(0,0,0) is not a point of the plane") from None


def _pencil_or_generic(args, geiser: bool) -> PencilSpec:
    if args.generic:
        return PencilSpec.geiser_generic() if geiser else PencilSpec.generic()
    spec = load_pencil(args.pencil)
    if geiser and not spec.is_geiser:
        raise UsageError("--geiser needs a1 = a2 = 0 in the pencil file")
    return spec


def _fmt(spec: PencilSpec, p) -> str:
    return spec.domain.format(p.constant_value()) if spec.is_concrete else canonical_text(p)


def _coords(values, dom) -> str:
    return ",".join(dom.format(v) for v in values)


# commands


def cmd_verify(args) -> int:
    if args.trials < 1:
        raise UsageError("--trials must be at least 1")
    try:
        GF(args.prime)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    report = run_suite(args.suite, args.mode, args.trials, args.prime, args.seed,
                       args.corrupt, args.mem_budget)
    doc = report.as_json(timings=args.timings)
    if args.timings:
        for c in report.checks:
            print(f"{c.name}: {c.ms:.1f} ms", file=sys.stderr)
    print(json.dumps(doc, indent=2))
    return 0 if report.status == "pass" else 1


def cmd_eval(args) -> int:
    spec = load_pencil(args.pencil)
    y = parse_point(args.point, spec.domain)
    try:
        z = geiser_apply(spec, y) if args.geiser else apply_bertini(spec, y)
    except SpecNotGeiser:
        raise UsageError("--geiser needs a1 = a2 = 0 in the pencil file") from None
    except DegeneratePoint as exc:
        raise Degenerate(str(exc)) from None
    print(z.text())
    return 0


def cmd_ram(args) -> int:
    spec = _pencil_or_generic(args, args.geiser)
    closed = ram_closed_form(spec.domain)
    if args.geiser:
        data = geiser_ram(closed, spec)
        keys = ("st", "p", "qt", "rt")
    else:
        data = closed.specialize(spec)
        keys = ("s", "p", "q", "r")
    print(json.dumps({k: [_fmt(spec, c) for c in getattr(data, k)] for k in keys}, indent=2))
    return 0


def cmd_poly(args) -> int:
    name = args.name
    if name not in BERTINI_NAMES + GEISER_ONLY:
        raise UsageError(f"unknown polynomial {name!r}; choose from {', '.join(BERTINI_NAMES + GEISER_ONLY)}")
    geiser = args.geiser or name in GEISER_ONLY
    spec = _pencil_or_generic(args, geiser)
    # with --geiser, names shared by both bundles (w, z1, ...) resolve to the Geiser one
    gb = build_geiser(spec) if geiser else None
    p = getattr(gb, name) if gb is not None and hasattr(gb, name) else getattr(build_bundle(spec), name)
    print(canonical_text(p))
    return 0


def cmd_map(args) -> int:
    spec = load_pencil(args.pencil)
    y = parse_point(args.point, spec.domain)
    dom = spec.domain
    try:
        if args.target == "cone":
            print(_coords(cone_map(spec, y).coords, dom))
        elif args.target == "sigma2":
            pt = sigma2_chart(spec, y)
            print(_coords((pt.x_affine, pt.y), dom))
        else:
            if not spec.is_geiser:
                raise UsageError("--target plane needs a Geiser pencil (a1 = a2 = 0)")
            print(anticanonical_map(spec, y).text())
    except (DegeneratePoint, ChartUndefined) as exc:
        raise Degenerate(str(exc)) from None
    return 0


def cmd_random(args) -> int:
    """Write a random pencil file (handy for trying the other commands)."""
    dom = GF(args.prime)
    spec = random_spec(dom, HashRNG(args.seed, "cli-pencil"), args.geiser)
    vals = spec.values()
    doc = {
        "field": {"prime": str(args.prime)},
        "w": {k: str(vals[k]) for k in UNPRIMED},
        "wp": {k: str(vals[k + "p"]) for k in UNPRIMED},
    }
    print(json.dumps(doc, indent=2))
    return 0


# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="involutions", description="Bertini and Geiser involutions of cubic pencils.")
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run the identity catalogue")
    v.add_argument("--suite", choices=SUITES + ("all",), default="all")
    v.add_argument("--mode", choices=("symbolic", "modular"), default="symbolic")
    v.add_argument("--trials", type=int, default=20)
    v.add_argument("--prime", type=int, default=MERSENNE61)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--mem-budget", type=int, default=DEFAULT_MEM_BUDGET, metavar="BYTES")
    v.add_argument("--timings", action="store_true", help="fill in ms and log timings to stderr")
    v.add_argument("--corrupt", choices=CORRUPTIONS, help="flip one sign (negative control)")
    v.set_defaults(func=cmd_verify)

    e = sub.add_parser("eval", help="apply the involution to a point")
    e.add_argument("--pencil", required=True)
    e.add_argument("--point", required=True)
    e.add_argument("--geiser", action="store_true")
    e.set_defaults(func=cmd_eval)

    for name, func, helptext in (("ram", cmd_ram, "ramification data as JSON"),
                                 ("poly", cmd_poly, "dump a named polynomial")):
        p = sub.add_parser(name, help=helptext)
        src = p.add_mutually_exclusive_group(required=True)
        src.add_argument("--pencil")
        src.add_argument("--generic", action="store_true")
        p.add_argument("--geiser", action="store_true")
        if name == "poly":
            p.add_argument("--name", required=True)
        p.set_defaults(func=func)

    m = sub.add_parser("map", help="image in the cone, Sigma_2 chart or plane")
    m.add_argument("--pencil", required=True)
    m.add_argument("--point", required=True)
    m.add_argument("--target", choices=("cone", "sigma2", "plane"), required=True)
    m.set_defaults(func=cmd_map)

    r = sub.add_parser("random-pencil", help="print a seeded random pencil file over F_p")
    r.add_argument("--prime", type=int, default=MERSENNE61)
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--geiser", action="store_true")
    r.set_defaults(func=cmd_random)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SpecNotConcrete as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Degenerate as exc:
        print(exc, file=sys.stderr)
        return 3


__all__ = ["main", "build_parser", "load_pencil", "parse_point"]
