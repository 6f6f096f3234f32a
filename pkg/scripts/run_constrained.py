"""Run the three interpolation-constrained examples and print their diagnostics.

Usage: python3 scripts/run_constrained.py [OUT_DIR] [K_MAX]
"""

import sys

import numpy as np

from baryminimax.experiments import run_experiment

NAMES = ("example2", "example3_cos", "example4_discontinuous")


def main(out="minimax_out", k_max=None):
    k_max = None if k_max is None else int(k_max)
    for name in NAMES:
        result = run_experiment(name, out_dir=out, k_max=k_max)
        for key, run in result.runs.items():
            rep = run.error_report()
            last = run.trace.records[-1]
            print(f"{name}: e={last.e:.6e} gap={last.gap:.3e} iterations={last.k} "
                  f"termination={run.trace.termination}")
            print(f"  extreme points: {run.extreme_points().cardinality} "
                  f"(bound n+2-ell={run.config.degree_n + 2 - run.interp.ell}, "
                  f"observed 2n+2-ell={2 * run.config.degree_n + 2 - run.interp.ell})")
            print(f"  constraint residuals (symmetric probe): {np.array2string(rep.interp_residuals, precision=3)}")
            print(f"  constraint residuals (one-sided probe): {np.array2string(rep.interp_residuals_offset, precision=3)}")


if __name__ == "__main__":
    main(*sys.argv[1:3])
