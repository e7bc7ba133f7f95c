"""Command-line front end: ``qident list|verify|expand|pairs|multisum``.

Exit status: 0 when everything checked holds, 1 on any verification
failure, 2 on usage or parse errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import List, Optional

from . import bailey, catalog as cat, verifier
from .errors import ExprSyntaxError, IndexOutOfRange, QSeriesError, UnknownLabel
from .expr import expand
from .multisum import FAMILIES, ALIASES, MultisumSpec, multisum, product_side

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    """argparse that raises instead of exiting, so main() can return a code."""

    def error(self, message):
        raise _Usage(f"{self.prog}: error: {message}")


class _Usage(Exception):
    pass


def _order(text: str) -> Fraction:
    try:
        v = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"invalid order {text!r}")
    if v < 0:
        raise argparse.ArgumentTypeError("order must be nonnegative")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="qident", description="Expand q-series and verify Rogers-Ramanujan type identities coefficient by coefficient.")
    sub = p.add_subparsers(dest="cmd", parser_class=_Parser, required=True)

    s = sub.add_parser("list", help="list catalog identities")
    s.add_argument("--format", choices=("text", "json"), default="text")

    s = sub.add_parser("verify", help="verify identities")
    who = s.add_mutually_exclusive_group(required=True)
    who.add_argument("--id", action="append", help="identity id (repeatable)")
    who.add_argument("--all", action="store_true", help="every identity plus the property suites")
    s.add_argument("--order", type=_order, default=Fraction(200))
    s.add_argument("--grid", type=int, choices=(1, 2), help="exponent grid q^(1/d); auto-detected by default")
    s.add_argument("--format", choices=("text", "json"), default="text")
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--out", help="append JSON-lines reports to FILE")
    s.add_argument("--direct-only", action="store_true", help="skip the proof-route checks")
    s.add_argument("--no-suites", action="store_true", help="with --all, skip the property suites")

    s = sub.add_parser("expand", help="expand an expression")
    s.add_argument("expr")
    s.add_argument("--order", type=_order, required=True)
    s.add_argument("--format", choices=("text", "json"), default="text")

    s = sub.add_parser("pairs", help="Bailey pairs")
    s.add_argument("--check", action="store_true", help="check the defining relation for every pair")
    s.add_argument("--nmax", type=int, default=25)
    s.add_argument("--order", type=_order, default=Fraction(100))

    s = sub.add_parser("multisum", help="expand a multisum and compare with its product")
    s.add_argument("--family", required=True, help=f"one of {', '.join(FAMILIES)} or {', '.join(ALIASES)}")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--i", type=int)
    s.add_argument("--order", type=_order, default=Fraction(100))
    s.add_argument("--format", choices=("text", "json"), default="text")
    return p


def _print_syntax_error(exc: ExprSyntaxError, out) -> None:
    print(f"qident: syntax error: {exc}", file=out)
    lines = (exc.text or "").splitlines() or [""]
    print("  " + lines[exc.line_no - 1], file=out)
    print("  " + " " * (exc.column - 1) + "^", file=out)


def _cmd_list(args, out) -> int:
    for id, tag, fam in cat.list_identities():
        if args.format == "json":
            print(json.dumps({"id": id, "eq_tag": tag, "family": fam}), file=out)
        else:
            print(f"{id:<12} {tag:<6} {fam}", file=out)
    return EXIT_OK


def _cmd_verify(args, out) -> int:
    if args.jobs < 1:
        raise _Usage("qident verify: error: --jobs must be >= 1")
    recipe = not args.direct_only
    if args.all:
        suites = () if args.no_suites else tuple(verifier.SUITES)
        summary = verifier.verify_all(args.order, args.jobs, args.grid, recipe, suites)
        reports, suite_results = summary.reports, summary.suites
    else:
        catalog = cat.default_catalog()
        for id in args.id:
            catalog.get(id)  # unknown ids are usage errors
        reports = [verifier.verify(id, args.order, args.grid, recipe) for id in args.id]
        suite_results = []
    if args.out:
        with open(args.out, "a", encoding="utf-8") as fh:
            verifier.write_reports(reports, fh)
    if args.format == "json":
        for r in reports:
            print(r.to_line(), file=out)
        for s in suite_results:
            print(json.dumps(s.to_json(), sort_keys=True), file=out)
    elif args.all:
        print(summary.text(), file=out)
    else:
        for r in reports:
            print(r, file=out)
    ok = all(r.ok for r in reports) and all(s.passed for s in suite_results)
    return EXIT_OK if ok else EXIT_FAIL


def _cmd_expand(args, out) -> int:
    s = expand(args.expr, args.order)
    if args.format == "json":
        print(json.dumps({"expr": args.expr, **s.to_json()}), file=out)
    else:
        print(s, file=out)
    return EXIT_OK


def _cmd_pairs(args, out) -> int:
    if not args.check:
        for label in bailey.LABELS:
            print(label, file=out)
        return EXIT_OK
    ok = True
    for label in bailey.LABELS:
        r = bailey.check_pair(bailey.make_pair(label), args.nmax, args.order)
        ok &= r.passed
        print(r, file=out)
    return EXIT_OK if ok else EXIT_FAIL


def _cmd_multisum(args, out) -> int:
    spec = MultisumSpec(args.family, args.k, args.i)
    lhs = multisum(spec, args.order)
    rhs = product_side(spec, args.order)
    diff = lhs.first_difference(rhs, args.order)
    if args.format == "json":
        rec = {"family": spec.family, "k": spec.k, "i": spec.i, "series": lhs.to_json(),
               "equal": diff is None}
        print(json.dumps(rec), file=out)
    else:
        print(lhs, file=out)
        if diff is None:
            print(f"sum = product below q^{args.order}", file=out)
        else:
            e, a, b = diff
            print(f"sum and product differ at q^{e}: {a} vs {b}", file=out)
    return EXIT_OK if diff is None else EXIT_FAIL


_COMMANDS = {
    "list": _cmd_list,
    "verify": _cmd_verify,
    "expand": _cmd_expand,
    "pairs": _cmd_pairs,
    "multisum": _cmd_multisum,
}


def main(argv: Optional[List[str]] = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _Usage as exc:
        print(parser.format_usage().rstrip(), file=err)
        print(exc, file=err)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    try:
        return _COMMANDS[args.cmd](args, out)
    except _Usage as exc:
        print(exc, file=err)
        return EXIT_USAGE
    except ExprSyntaxError as exc:
        _print_syntax_error(exc, err)
        return EXIT_USAGE
    except (UnknownLabel, IndexOutOfRange) as exc:
        print(f"qident: error: {exc}", file=err)
        return EXIT_USAGE
    except QSeriesError as exc:
        print(f"qident: {type(exc).__name__}: {exc}", file=err)
        return EXIT_FAIL


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
