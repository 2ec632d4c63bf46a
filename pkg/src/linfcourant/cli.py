"""Command line entry point: ``verify`` scenarios and ``parse-form`` expressions."""

import argparse
import json
import sys

from .errors import InvalidInputError
from .harness import SUITES, load_scenario, run
from .parser import parse_form

EXIT_PASS, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser():
    p = _Parser(prog="linfcourant", description="Exact checks of higher Courant L-infinity structures.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    v = sub.add_parser("verify", help="run the suites of a scenario file")
    v.add_argument("scenario")
    v.add_argument("--out", help="write the JSON report here instead of stdout")
    v.add_argument("--seed", type=int)
    v.add_argument("--suites", help=f"comma-separated subset of: {', '.join(SUITES)}")
    f = sub.add_parser("parse-form", help="echo the canonical rendering of a form")
    f.add_argument("expr")
    f.add_argument("--dim", type=int, required=True)
    return p


def _verify(args):
    sc = load_scenario(args.scenario)
    if args.seed is not None:
        sc.seed = args.seed
    if args.suites is not None:
        sc.suites = [s.strip() for s in args.suites.split(",") if s.strip()]
    report = run(sc)
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_PASS if report["passed"] else EXIT_FAIL


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        if args.command == "verify":
            return _verify(args)
        print(parse_form(args.expr, args.dim))
        return EXIT_PASS
    except (InvalidInputError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
