"""Run every scenario file in scenarios/ and print one summary line per file.

    python3 scripts/run_scenarios.py [--cases N] [--report text|json] [files...]

Exit code is 0 only if every scenario passes.  The obstructed moment-map
scenarios are expected to fail (see README).
"""
import argparse
import sys
from dataclasses import replace
from pathlib import Path

from lie2gerbe.scenario import parse_scenario, render_report, run_suites

ROOT = Path(__file__).resolve().parent.parent


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("files", nargs="*", type=Path)
    ap.add_argument("--cases", type=int)
    ap.add_argument("--report", choices=("text", "json"))
    args = ap.parse_args(argv)
    files = args.files or sorted((ROOT / "scenarios").glob("*.scn"))
    all_ok = True
    for path in files:
        doc = parse_scenario(path.read_text(encoding="utf-8"))
        opts = replace(doc.options, cases=args.cases) if args.cases else doc.options
        rep = run_suites(doc, opts)
        all_ok &= rep.ok
        print(f"{'ok  ' if rep.ok else 'FAIL'} {path.name}: {rep.summary}")
        if args.report:
            print(render_report(rep, args.report, timing=False))
    return 0 if all_ok else 1


if __name__ == "__main__":
    sys.exit(main())
