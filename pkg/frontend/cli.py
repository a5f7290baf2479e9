# frontend/cli.py
"""
Command line entry point.

    python -m frontend.cli run session.lrh [--json] [--trunc N]
    python -m frontend.cli verify [--suite paper] [--trials N] [--seed S] [--json] [--workers W] [--timing]
    python -m frontend.cli explain <statement-id> | --list

Exit codes: 0 success, 1 a check returned false or a campaign had failures,
2 bad input.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import List, Optional

from pydantic import ValidationError

from app.config import settings
from app.errors import RegDefectError, SessionError
from app.logger import get_logger
from app.verify import CATALOG, OUT_OF_SCOPE, GenParams, StatementId, campaign, explain
from frontend.components.parser import parse_session
from frontend.components.session import SessionOptions, execute

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_INPUT_ERROR = 2


def create_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="regdefect",
        description="Regularity defects of local ring maps: sessions, verification campaigns, statement catalog.",
        epilog=(
            f"Environment: {settings.TRUNC_DEGREE_ENV} sets the default truncation degree "
            f"(currently {settings.TRUNC_DEGREE}); REGDEFECT_LOG_LEVEL sets the log level."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="execute a session file")
    run.add_argument("file", help="session file (.lrh), or - for stdin")
    run.add_argument("--json", action="store_true", help="emit the JSON report")
    run.add_argument("--trunc", type=int, default=None, help="truncation degree for declarations")

    verify = sub.add_parser("verify", help="run the statement catalog on random instances")
    verify.add_argument(
        "--suite",
        choices=["paper", "catalog"],
        default="paper",
        help="statement suite; both names select the full catalog",
    )
    verify.add_argument("--trials", type=int, default=100)
    verify.add_argument("--seed", type=int, default=0)
    verify.add_argument("--field", default="GF(5)", help="QQ or GF(p)")
    verify.add_argument("--statement", action="append", default=None, help="restrict to a statement id (repeatable)")
    verify.add_argument("--workers", type=int, default=settings.WORKERS)
    verify.add_argument("--json", action="store_true")
    verify.add_argument("--timing", action="store_true", help="include wall time in the JSON report")

    expl = sub.add_parser("explain", help="describe a catalog statement")
    expl.add_argument("statement", nargs="?", help="statement id")
    expl.add_argument("--list", action="store_true", help="list every statement id")
    return parser


def _read(path: str) -> bytes:
    if path == "-":
        return sys.stdin.buffer.read()
    return Path(path).read_bytes()


def cmd_run(args) -> int:
    try:
        data = _read(args.file)
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    try:
        options = SessionOptions() if args.trunc is None else SessionOptions(trunc_degree=args.trunc)
        report = execute(parse_session(data), options)
    except ValidationError as e:
        print(f"error: {e.errors()[0]['msg']}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    except SessionError as e:
        print(e.diagnostic(args.file), file=sys.stderr)
        return EXIT_INPUT_ERROR
    print(report.to_json() if args.json else report.to_text(), end="" if not args.json else "\n")
    return EXIT_OK if report.ok else EXIT_CHECK_FAILED


def cmd_verify(args) -> int:
    try:
        params = GenParams(field=args.field, seed=args.seed)
        statements = [StatementId(s) for s in args.statement] if args.statement else None
        report = campaign(params, args.trials, statements, workers=max(1, args.workers), timing=args.timing)
    except (ValidationError, ValueError, RegDefectError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    if args.json:
        print(report.to_json())
    else:
        for tally in report.statements:
            skipped = sum(tally.skipped.values())
            print(f"{tally.statement.value:34} pass {tally.passed:5}  fail {tally.failed:4}  skip {skipped:4}")
        print(f"skip rate {report.skip_rate:.2%}, generation errors {report.generation_errors}")
        for v in report.failures:
            print(f"\nFAIL {v.statement.value} (seed {v.replay.seed}, {v.replay.shape}): {v.details}")
            print(v.replay.session)
    return EXIT_OK if report.ok else EXIT_CHECK_FAILED


def cmd_explain(args) -> int:
    if args.list:
        for sid in CATALOG:
            print(sid.value)
        for name, why in OUT_OF_SCOPE.items():
            print(f"{name} (out of scope: {why})")
        return EXIT_OK
    if not args.statement:
        print("error: give a statement id or --list", file=sys.stderr)
        return EXIT_INPUT_ERROR
    try:
        print(explain(StatementId(args.statement)))
    except ValueError:
        if args.statement in OUT_OF_SCOPE:
            print(f"{args.statement}: out of scope ({OUT_OF_SCOPE[args.statement]})")
            return EXIT_OK
        print(f"error: unknown statement '{args.statement}'", file=sys.stderr)
        return EXIT_INPUT_ERROR
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    parser = create_parser()
    args = parser.parse_args(argv)
    handlers = {"run": cmd_run, "verify": cmd_verify, "explain": cmd_explain}
    return handlers[args.command](args)


if __name__ == "__main__":
    sys.exit(main())
