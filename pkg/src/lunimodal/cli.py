"""Command-line front end.

    lunimodal count --lambda 3,2,2 --family Di --index 1
    lunimodal poly --lambda 4
    lunimodal char --lambda 1,1,3 --method mn
    lunimodal expand --kind G -k 2 --max 6
    lunimodal verify --max-n 7

``--json`` prints one record per line with integers as decimal strings;
``--dump PATH`` also writes those records to a file.  Exit codes: 0 success,
1 verification mismatch, 2 usage error, 3 refused brute force.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from typing import Sequence

from . import gf
from .characters import DEFAULT_BRUTE_FORCE_LIMIT, BruteForceRefused, Method, gelfand
from .perm import Composition
from .verify import PROPERTIES, run_properties

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE, EXIT_REFUSED = 0, 1, 2, 3

_VARIABLES = "xyzw"


def _composition(text: str) -> Composition:
    try:
        c = Composition.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None
    if c.k == 0:
        raise argparse.ArgumentTypeError("empty composition")
    return c


def _method(text: str) -> Method:
    try:
        return Method.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _record(command, lam, result, method, start) -> dict:
    return {
        "command": command,
        "lambda": list(lam),
        "result": result,
        "method": method,
        "wall_time_ms": round((time.perf_counter() - start) * 1000, 3),
    }


def _monomial(exponents: Sequence[int]) -> str:
    names = _VARIABLES if len(exponents) <= len(_VARIABLES) else None
    out = []
    for i, e in enumerate(exponents):
        var = names[i] if names else f"x{i + 1}"
        out.append(var if e == 1 else f"{var}^{e}")
    return "".join(out) or "1"


def _term_text(exponents, coefficient) -> str:
    mono = _monomial(exponents)
    if mono == "1":
        return str(coefficient)
    if coefficient == 1:
        return mono
    if coefficient == -1:
        return "-" + mono
    return f"{coefficient}{mono}"


def _series_text(terms) -> str:
    if not terms:
        return "0"
    text = _term_text(*terms[0])
    for exps, coef in terms[1:]:
        if coef < 0:
            text += " - " + _term_text(exps, -coef)
        else:
            text += " + " + _term_text(exps, coef)
    return text


def cmd_count(args, engine):
    start = time.perf_counter()
    c = args.lam
    if args.family == "L":
        if args.index is not None:
            raise _Usage("--index is only valid for Lj and Di")
        value = gf.count_L(c, engine)
    else:
        _check_index(args, c)
        fn = gf.count_Lj if args.family == "Lj" else gf.count_Di
        value = fn(c, args.index, engine)
    rec = _record("count", c, str(value), "recurrence", start)
    return [rec], str(value), EXIT_OK


def cmd_poly(args, engine):
    start = time.perf_counter()
    poly = gf.poly_Lt(args.lam, engine)
    coeffs = list(poly)
    rec = _record("poly", args.lam, [str(a) for a in coeffs], "recurrence", start)
    return [rec], "[" + ",".join(map(str, coeffs)) + "]", EXIT_OK


def cmd_char(args, engine):
    start = time.perf_counter()
    cv = gelfand(args.lam, args.method, brute_force_limit=args.brute_force_limit,
                 engine=engine)
    rec = _record("char", args.lam, str(cv.value), cv.method.value, start)
    return [rec], str(cv.value), EXIT_OK


def cmd_expand(args, engine):
    start = time.perf_counter()
    if args.k < 0:
        raise _Usage("-k must be nonnegative")
    if args.max < args.k:
        raise _Usage("--max must be at least k")
    index = args.index
    if args.kind in gf.INDEXED_KINDS:
        if index is None or not 1 <= index <= args.k:
            raise _Usage(f"family {args.kind} needs --index in 1..{args.k}")
    elif index is not None:
        raise _Usage(f"family {args.kind} takes no --index")
    terms = []
    for term in gf.expand_family(args.kind, args.k, args.max, index, engine):
        coef = term.coefficient
        if args.kind in gf.POLY_KINDS:
            coef = list(coef)
            if any(coef):
                terms.append((term.comp.parts, coef))
        elif coef:
            terms.append((term.comp.parts, coef))
    payload = [
        {"exponents": list(exps),
         "coefficient": [str(a) for a in coef] if isinstance(coef, list) else str(coef)}
        for exps, coef in terms
    ]
    rec = _record("expand", [], payload, "recurrence", start)
    rec["kind"], rec["k"], rec["max"] = args.kind, args.k, args.max
    if args.format == "json":
        text = json.dumps(payload)
    elif args.kind in gf.POLY_KINDS:
        text = "\n".join(f"{_monomial(e)}: {c}" for e, c in terms)
    else:
        text = _series_text(terms)
    return [rec], text, EXIT_OK


def cmd_verify(args, engine):
    names = args.properties.split(",") if args.properties else None
    try:
        results = run_properties(args.max_n, names, engine=engine,
                                 brute_force_limit=args.brute_force_limit,
                                 workers=args.workers)
    except ValueError as exc:
        raise _Usage(str(exc)) from None
    records, lines = [], []
    for r in results:
        records.append({
            "command": "verify", "lambda": [],
            "result": {"property": r.name, "passed": r.passed,
                       "checked": str(r.checked), "detail": r.detail},
            "method": "cross-validation", "wall_time_ms": round(r.seconds * 1000, 3),
        })
        status = "PASS" if r.passed else "FAIL"
        line = f"{status}  {r.name:<28} {r.checked:>7} checks  {r.seconds:7.2f}s"
        if r.detail:
            line += f"\n      {r.detail}"
        lines.append(line)
    ok = all(r.passed for r in results)
    lines.append(f"{sum(r.passed for r in results)}/{len(results)} properties passed"
                 f" (max n = {args.max_n})")
    return records, "\n".join(lines), EXIT_OK if ok else EXIT_MISMATCH


class _Usage(Exception):
    pass


def _check_index(args, c: Composition):
    if args.index is None:
        raise _Usage(f"family {args.family} needs --index")
    if not 1 <= args.index <= c.k:
        raise _Usage(f"--index must be in 1..{c.k}")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS,
                        help="print one JSON record per line")
    common.add_argument("--dump", metavar="PATH", default=argparse.SUPPRESS,
                        help="also write the JSON records to PATH")

    parser = argparse.ArgumentParser(
        prog="lunimodal",
        description="Counts, descent polynomials and Gelfand characters of "
                    "lambda-unimodal involutions.")
    parser.add_argument("--json", action="store_true", help="print one JSON record per line")
    parser.add_argument("--dump", metavar="PATH", help="also write the JSON records to PATH")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("count", parents=[common], help="size of I, I_j or D_i")
    p.add_argument("--lambda", dest="lam", type=_composition, required=True,
                   help="composition, e.g. 3,2,2")
    p.add_argument("--family", choices=("L", "Lj", "Di"), default="L")
    p.add_argument("--index", type=int)
    p.set_defaults(handler=cmd_count)

    p = sub.add_parser("poly", parents=[common],
                       help="lambda-descent distribution, lowest degree first")
    p.add_argument("--lambda", dest="lam", type=_composition, required=True)
    p.set_defaults(handler=cmd_poly)

    p = sub.add_parser("char", parents=[common], help="Gelfand character value")
    p.add_argument("--lambda", dest="lam", type=_composition, required=True)
    p.add_argument("--method", type=_method, default=Method.RECURRENCE,
                   help="recurrence, signed-sum or mn (murnaghan-nakayama)")
    p.add_argument("--brute-force-limit", type=int, default=DEFAULT_BRUTE_FORCE_LIMIT,
                   help="largest n the signed-sum method will enumerate")
    p.set_defaults(handler=cmd_char)

    p = sub.add_parser("expand", parents=[common], help="leading terms of a series")
    p.add_argument("--kind", choices=gf.KINDS, required=True)
    p.add_argument("-k", type=int, required=True, help="number of variables")
    p.add_argument("--max", type=int, required=True, help="largest total degree")
    p.add_argument("--index", type=int)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(handler=cmd_expand)

    p = sub.add_parser("verify", parents=[common], help="run the cross-validation suite")
    p.add_argument("--max-n", type=int, default=6)
    p.add_argument("--properties", help="comma-separated subset of: "
                   + ", ".join(PROPERTIES))
    p.add_argument("--brute-force-limit", type=int, default=DEFAULT_BRUTE_FORCE_LIMIT)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(handler=cmd_verify)
    return parser


def main(argv: Sequence[str] | None = None, engine: gf.Engine | None = None) -> int:
    """Entry point; ``engine`` lets callers supply (or tamper with) the memo."""
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        records, text, code = args.handler(args, engine)
    except _Usage as exc:
        parser.error(str(exc))
    except BruteForceRefused as exc:
        print(f"lunimodal: refused: {exc}", file=sys.stderr)
        return EXIT_REFUSED
    if args.json:
        for rec in records:
            print(json.dumps(rec))
    else:
        print(text)
    if args.dump:
        with open(args.dump, "w", encoding="utf-8") as fh:
            for rec in records:
                fh.write(json.dumps(rec) + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
