"""Regenerate the |x| maximum-error table for n = 4, 8, ..., 40 (m = 20000).

Usage: python3 scripts/run_table1.py [OUT_DIR]
"""

import sys

from baryminimax.experiments import run_experiment


def main(out="minimax_out"):
    result = run_experiment("abs_x_table", out_dir=out)
    print(f"{'n':>3} {'computed':>12} {'reference':>12} {'ratio':>8}  termination")
    for row in result.table:
        print(f"{row['n']:>3} {row['computed']:12.4e} {row['reference']:12.4e} {row['ratio']:8.4f}  {row['termination']}")
    print(f"bundles and comparison.csv under {out}/abs_x_table/")


if __name__ == "__main__":
    main(*sys.argv[1:2])
