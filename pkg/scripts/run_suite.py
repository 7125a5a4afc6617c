#!/usr/bin/env python3
"""Run the CLI suite over several types and collect the JSON reports in one directory."""
import argparse
import json
import sys
from pathlib import Path

from qaffine.cli import main as cli_main

DEFAULT_TYPES = ["A2^1", "A3^1", "C2^1"]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--types", nargs="+", default=DEFAULT_TYPES)
    ap.add_argument("--out", type=Path, default=Path("reports"))
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--strict", action="store_true")
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)
    worst = 0
    for t in args.types:
        path = args.out / f"suite_{t.replace('^', '_')}.json"
        argv = ["suite", "--type", t, "--seed", str(args.seed), "--json", str(path)]
        code = cli_main(argv + (["--strict"] if args.strict else []))
        data = json.loads(path.read_text())
        print(f"{t}: exit {code}, {len(data['goals'])} goals, "
              f"{len(data['discrepancies'])} discrepancies -> {path}")
        worst = max(worst, code)
    return worst


if __name__ == "__main__":
    sys.exit(main())
