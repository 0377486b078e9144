"""Command line: ``fourstate verify | wavecone | laminate``.

Exit codes: 0 success, 1 a mathematical check failed, 2 bad input or usage.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from .data import preset_document
from .errors import (
    FourStateError,
    IllegalSplit,
    InputError,
    NotAWaveDirection,
    PreconditionUnverified,
    SingularInterpolation,
    UnknownLeaf,
)
from .exact import format_rational, parse_rational, vadd, vscale
from .laminate import (
    LaminateTree,
    Rect,
    check_exactness,
    decimal_string,
    laminate_deviation_bound,
    oscillation_norms,
    refine_field,
    simple_laminate_field,
    split,
    write_grid_csv,
)
from .t4 import LargeT4Data
from .verify import run_pipeline, solve_coefficients

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


def rational_arg(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except InputError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def vector_arg(n: int):
    def parse(text: str) -> tuple:
        parts = text.split(",")
        if len(parts) != n:
            raise argparse.ArgumentTypeError(f"expected {n} comma-separated rationals, got {text!r}")
        return tuple(rational_arg(p) for p in parts)
    parse.__name__ = f"vector{n}"
    return parse


def load_data(args) -> LargeT4Data:
    if args.input:
        try:
            doc = json.loads(Path(args.input).read_text())
        except (OSError, UnicodeDecodeError, json.JSONDecodeError) as exc:
            raise InputError(f"cannot read {args.input}: {exc}") from exc
    else:
        doc = preset_document()
    if not isinstance(doc, dict):
        raise InputError("configuration document must be an object")
    return LargeT4Data.from_document(doc)


def _emit(text: str, path: str | None) -> None:
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_verify(args) -> int:
    data = load_data(args)
    report = run_pipeline(data)
    _emit(report.to_json(), args.output)
    for check in report.failures():
        print(f"FAIL {check.name}", file=sys.stderr)
    if args.output:
        print(f"overall {report.status}")
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_wavecone(args) -> int:
    from .operator import wave_cone_member

    data = load_data(args)
    try:
        F = solve_coefficients(data)
        verdict = wave_cone_member(F, args.vector)
    except (SingularInterpolation, PreconditionUnverified) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    word = "member" if verdict.member else "non-member"
    print(f"{word}: {verdict.certificate}")
    return EXIT_OK


def _labelled(areas: dict, labels: dict, digits: int) -> dict:
    return {labels[v]: {"exact": format_rational(a), "decimal": decimal_string(a, digits)}
            for v, a in areas.items()}


def cmd_laminate(args) -> int:
    if args.grid < 1:
        raise InputError("grid resolution must be at least 1")
    if args.levels not in (1, 2):
        raise InputError("levels must be 1 or 2")
    data = load_data(args)
    F = solve_coefficients(data)
    domain = Rect(*args.domain)
    lam, digits = args.lam, args.precision
    doc: dict = {"levels": args.levels, "domain": [format_rational(x) for x in args.domain],
                 "lambda": format_rational(lam)}
    if args.levels == 1:
        a = args.a
        b = args.b if args.b is not None else data.configs[0].c[0]
        fld = simple_laminate_field(F, a, b, lam, args.xi0, args.eps, domain)
        labels = fld.all_labels()
        weights = {a: lam, b: 1 - lam}
        doc["xi0"] = [format_rational(x) for x in args.xi0]
        doc["eps"] = format_rational(args.eps)
        doc["deviation_bound"] = format_rational(laminate_deviation_bound(domain, args.xi0, args.eps))
        doc["oscillation_norms"] = {str(j): {"exact": format_rational(v), "decimal": decimal_string(v, digits)}
                                    for j, v in oscillation_norms(fld).items()}
    else:
        cfg = data.configs[0]
        a1, a2 = cfg.points[0], cfg.points[1]
        p1 = vadd(cfg.p, cfg.c[0])
        half = Fraction(1, 2)
        first = simple_laminate_field(F, a2, p1, lam, (19, -8) if args.xi1 is None else args.xi1,
                                      args.eps1, domain, labels=("a2", "P1"))
        result = refine_field(first, p1, a1, cfg.p, half, args.alpha, F, args.xi0, args.eps, labels=("a1", "p"))
        fld = result.field
        labels = fld.all_labels()
        tree = LaminateTree.dirac(vadd(vscale(lam, a2), vscale(1 - lam, p1)))
        tree = split(tree, tree.barycenter, a2, p1, lam, 1, F)
        tree = split(tree, p1, a1, cfg.p, half, 1, F)
        weights = dict(tree.leaves)
        target = fld.target_area()
        doc["defect_area"] = format_rational(result.defect_area)
        doc["defect_budget"] = format_rational(args.alpha * target)
        doc["defect_within_budget"] = result.defect_area <= args.alpha * target
    areas = fld.volume_fractions()
    total = sum(areas.values(), Fraction(0))
    exact = check_exactness(fld)
    doc["areas"] = _labelled(areas, labels, digits)
    doc["fractions"] = _labelled({v: a / domain.area for v, a in areas.items()}, labels, digits)
    doc["tree_weights"] = {labels[v]: format_rational(w) for v, w in weights.items()}
    doc["total_area"] = format_rational(total)
    doc["pieces_exact"] = exact
    _emit(json.dumps(doc, indent=2) + "\n", args.output)
    grid_file = args.grid_file or (str(Path(args.output).with_suffix(".csv")) if args.output else None)
    if grid_file:
        write_grid_csv(fld, grid_file, args.grid, digits)
    ok = exact and total == domain.area and doc.get("defect_within_budget", True)
    return EXIT_OK if ok else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fourstate", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def source(p):
        g = p.add_mutually_exclusive_group()
        g.add_argument("--preset", choices=["paper"], default="paper", help="embedded dataset (default)")
        g.add_argument("--input", help="configuration document (JSON)")
        p.add_argument("--output", help="write the document here instead of stdout")

    p = sub.add_parser("verify", help="run every certificate")
    source(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("wavecone", help="decide wave-cone membership of a vector")
    source(p)
    p.add_argument("--vector", "-v", type=vector_arg(3), required=True, help="e.g. 7/15,-1/15,-2/15")
    p.set_defaults(func=cmd_wavecone)

    p = sub.add_parser("laminate", help="build a laminate field and report its volume fractions")
    source(p)
    p.add_argument("--lambda", dest="lam", type=rational_arg, default=Fraction(1, 2))
    p.add_argument("--eps", type=rational_arg, default=Fraction(1, 10), help="scale of the finest level")
    p.add_argument("--xi0", type=vector_arg(2), default=(Fraction(-14), Fraction(5)),
                   help="direction of the finest level")
    p.add_argument("--levels", type=int, default=1)
    p.add_argument("--alpha", type=rational_arg, default=Fraction(1, 10), help="coverage defect budget")
    p.add_argument("--grid", type=int, default=16, help="export grid resolution per axis")
    p.add_argument("--grid-file", help="CSV path for the grid export")
    p.add_argument("--a", type=vector_arg(3), default=(Fraction(0),) * 3)
    p.add_argument("--b", type=vector_arg(3), default=None, help="defaults to the first leg")
    p.add_argument("--eps1", type=rational_arg, default=Fraction(4), help="scale of the coarse level")
    p.add_argument("--xi1", type=vector_arg(2), default=None, help="direction of the coarse level")
    p.add_argument("--domain", type=vector_arg(4), default=(Fraction(0), Fraction(0), Fraction(1), Fraction(1)),
                   help="x0,y0,x1,y1")
    p.add_argument("--precision", type=int, default=6, help="decimal digits in exports")
    p.set_defaults(func=cmd_laminate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (NotAWaveDirection, IllegalSplit, UnknownLeaf, SingularInterpolation, PreconditionUnverified) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (InputError, FourStateError, ValueError, TypeError, KeyError, OSError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
