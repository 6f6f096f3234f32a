"""Sign approximation on a vertical segment and the unit circle, type (15, 15).

Runs the unconstrained problem and the variant that pins the segment ends.
Usage: python3 scripts/run_sign_problem.py [OUT_DIR]
"""

import sys

from baryminimax.experiments import describe, run_experiment


def main(out="minimax_out"):
    result = run_experiment("example6_sign", out_dir=out)
    print("\n".join(describe(result)))
    for key, run in result.runs.items():
        best = run.trace.records[run.trace.best_index]
        print(f"{key}: smallest e over the trace {best.e:.4e} at k={best.k}")


if __name__ == "__main__":
    main(*sys.argv[1:2])
