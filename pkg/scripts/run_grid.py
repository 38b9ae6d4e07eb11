"""Run the seven case-study cells with both planners and compare against the reference counts.

    python scripts/run_grid.py --reps 10 --out grid.csv
    python scripts/run_grid.py --large --timeout-s 200   # also try 20/20/20
"""
import argparse
import sys
from pathlib import Path

from dkbplan.bench import run_grid
from dkbplan.casegen import GRID_CELLS


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--reps", type=int, default=10)
    ap.add_argument("--timeout-s", type=float, default=200.0)
    ap.add_argument("--out", type=Path)
    ap.add_argument("--large", action="store_true", help="append the 20/20/20 cell")
    args = ap.parse_args(argv)

    cells = list(GRID_CELLS) + ([(20, 20, 20)] if args.large else [])
    report = run_grid(cells, repetitions=args.reps, timeout_s=args.timeout_s)
    print(report.format_table())
    if args.out:
        args.out.write_text(report.to_csv(), encoding="utf-8")
        print(f"wrote {args.out}", file=sys.stderr)


if __name__ == "__main__":
    main()
