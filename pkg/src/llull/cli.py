"""Command-line interface: tally an election or run the property suites.

Exit codes: 0 success, 2 input could not be parsed, 3 the turnout program
was infeasible, 4 the candidate order was not admissible, 5 a verification
suite reported failures.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from pathlib import Path

from .ballots import read_ballot_file
from .errors import BallotError, Infeasible, LlullError, MatrixFormatError, NotAdmissible
from .pipeline import RunConfig, parse_formula, parse_rules, parse_variant, run
from .verify import SUITES, run_all, run_suite

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_INFEASIBLE = 3
EXIT_NOT_ADMISSIBLE = 4
EXIT_VERIFY = 5


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="llull",
        description="Continuous rating of preferential votes with incomplete ballots.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    runp = sub.add_parser("run", help="tally a ballot file or a score matrix")
    runp.add_argument("input", help="ballot file, or matrix CSV with --matrix")
    runp.add_argument(
        "--variant",
        default="main",
        choices=["main", "codual", "balanced", "margin-based"],
    )
    runp.add_argument(
        "--listed-vs-unlisted",
        default="preferred",
        choices=["preferred", "noinfo"],
        help="how a listed/unlisted pair counts",
    )
    runp.add_argument(
        "--unlisted-pair",
        default="noinfo",
        choices=["noinfo", "tied"],
        help="how a pair absent from a ballot counts",
    )
    runp.add_argument(
        "--total-voters",
        default=None,
        help="voter denominator; defaults to the sum of ballot weights",
    )
    runp.add_argument("--formula", default="main", choices=["main", "alt"])
    runp.add_argument("--json", action="store_true", help="emit JSON instead of text")
    runp.add_argument(
        "--intermediates",
        action="store_true",
        help="include every intermediate matrix in the (JSON) report",
    )
    runp.add_argument(
        "--matrix",
        action="store_true",
        help="input is a pairwise score matrix, not ballots",
    )

    verp = sub.add_parser("verify", help="run the property suites")
    verp.add_argument(
        "--suite", default="all", choices=["all", *SUITES.keys()]
    )
    verp.add_argument("--cases", type=int, default=100)
    verp.add_argument("--seed", type=int, default=0)
    verp.add_argument(
        "--input",
        default=None,
        help="optional ballot file checked as an extra fixture case",
    )
    return parser


def _cmd_run(args) -> int:
    try:
        text = Path(args.input).read_text(encoding="utf-8")
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    config = RunConfig(
        variant=parse_variant(args.variant),
        rules=parse_rules(args.listed_vs_unlisted, args.unlisted_pair),
        total_voters=None if args.total_voters is None else Fraction(args.total_voters),
        formula=parse_formula(args.formula),
        json_output=args.json,
        intermediates=args.intermediates,
        matrix_input=args.matrix,
    )
    try:
        sys.stdout.write(run(text, config))
    except (BallotError, MatrixFormatError) as exc:
        print(f"error: {args.input}: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except Infeasible as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except NotAdmissible as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NOT_ADMISSIBLE
    except LlullError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    return EXIT_OK


def _cmd_verify(args) -> int:
    fixture = None
    if args.input is not None:
        try:
            fixture = read_ballot_file(Path(args.input).read_text(encoding="utf-8"))
        except (OSError, BallotError) as exc:
            print(f"error: {args.input}: {exc}", file=sys.stderr)
            return EXIT_PARSE
    if args.suite == "all":
        reports = run_all(args.cases, args.seed, fixture)
    else:
        reports = [run_suite(args.suite, args.cases, args.seed, fixture)]

    failed = False
    for report in reports:
        n_failed = len(report.failures)
        status = "ok" if report.passed else f"{n_failed} FAILED"
        print(f"{report.suite}: {len(report.outcomes)} cases, {status}")
        for outcome in report.outcomes:
            if outcome.passed and outcome.detail:
                print(f"  note case {outcome.case}: {outcome.detail}")
        for outcome in report.failures:
            failed = True
            print(f"  case {outcome.case}: {outcome.detail}")
            if outcome.replay:
                print("  replay:")
                for line in outcome.replay.rstrip().splitlines():
                    print(f"    {line}")
    return EXIT_VERIFY if failed else EXIT_OK


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "run":
        return _cmd_run(args)
    return _cmd_verify(args)


if __name__ == "__main__":
    sys.exit(main())
