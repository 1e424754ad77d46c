#!/usr/bin/env python3
"""Run every config in configs/ and emit one combined report.

    python3 scripts/reproduce.py                 # csv to stdout
    python3 scripts/reproduce.py --format json   # json to stdout
    python3 scripts/reproduce.py --out report.csv

Per-scenario wall-clock timings go to stderr so the report stream stays
clean.  Configs run in sorted filename order; apart from elapsed_ms the
output is identical from run to run.
"""

import argparse
import sys
from pathlib import Path
from time import perf_counter

from cosetpack import emit_report, parse_config, run_scenario

CONFIG_DIR = Path(__file__).resolve().parent.parent / "configs"


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--format", choices=("csv", "json"), default="csv")
    parser.add_argument("--out", type=Path, default=None,
                        help="write the report here instead of stdout")
    parser.add_argument("--budget-nodes", type=int, default=None,
                        dest="budget_nodes", help="node cap for every search")
    args = parser.parse_args(argv)

    paths = sorted(CONFIG_DIR.glob("*.cfg"))
    if not paths:
        print(f"no configs found under {CONFIG_DIR}", file=sys.stderr)
        return 1
    rows = []
    for path in paths:
        config = parse_config(path.read_text(encoding="utf-8"))
        t0 = perf_counter()
        rows.extend(run_scenario(config, args.budget_nodes))
        print(f"{path.name:28s} {perf_counter() - t0:7.2f}s", file=sys.stderr)

    blob = emit_report(rows, args.format)
    if args.out is None:
        sys.stdout.buffer.write(blob)
    else:
        args.out.write_bytes(blob)
        print(f"wrote {args.out} ({len(rows)} rows)", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
