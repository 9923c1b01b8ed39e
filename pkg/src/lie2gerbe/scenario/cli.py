"""Command line: ``lie2gerbe check <file> [--suite NAME]... [--cases N] [--seed S] [--max-degree D] [--report text|json]``.

Exit codes: 0 all checks pass, 1 some check failed, 2 input or configuration error.
"""
from __future__ import annotations

import argparse
import sys
from dataclasses import replace

from .parser import SUITES, ScenarioError, parse_scenario
from .runner import SUITE_HELP, render_report, run_suites


def _suite_help() -> str:
    width = max(map(len, SUITES))
    return "suites:\n" + "\n".join(f"  {n:<{width}}  {SUITE_HELP[n]}" for n in SUITES)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="lie2gerbe", description="Exact checks of Lie 2-algebra and gerbe identities.")
    sub = ap.add_subparsers(dest="command", required=True)
    check = sub.add_parser("check", help="run suites on a scenario file", epilog=_suite_help(),
                           formatter_class=argparse.RawDescriptionHelpFormatter)
    check.add_argument("file", help="scenario file ('-' for stdin)")
    check.add_argument("--suite", action="append", choices=SUITES, metavar="NAME",
                       help="suite to run (repeatable; default: the file's suite list, else all)")
    check.add_argument("--cases", type=int, help="random cases per check")
    check.add_argument("--seed", type=int, help="random seed")
    check.add_argument("--max-degree", type=int, help="maximum polynomial degree of sampled data")
    check.add_argument("--report", choices=("text", "json"), default="text")
    check.add_argument("--no-timing", action="store_true", help="omit timings (byte-stable output)")
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    try:
        text = sys.stdin.read() if args.file == "-" else open(args.file, encoding="utf-8").read()
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        doc = parse_scenario(text)
        opts = doc.options
        for key in ("cases", "seed", "max_degree"):
            val = getattr(args, key)
            if val is not None:
                if val < (1 if key == "cases" else 0):
                    raise ScenarioError(f"--{key.replace('_', '-')} out of range")
                opts = replace(opts, **{key: val})
        report = run_suites(doc, opts, suites=args.suite)
    except ScenarioError as exc:
        print(f"{args.file}: {exc}", file=sys.stderr)
        return 2
    print(render_report(report, args.report, timing=not args.no_timing))
    return 0 if report.ok else 1


if __name__ == "__main__":
    sys.exit(main())
