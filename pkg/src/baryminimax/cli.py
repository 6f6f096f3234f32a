"""Command-line entry point: ``baryminimax {fit, experiment, eval}``.

Exit codes: 0 converged, 1 input error, 2 iteration limit reached,
3 degenerate dual or conditioning failure.
"""

from __future__ import annotations

import argparse
import csv
import sys

import numpy as np

from .barycentric import evaluate
from .errors import ArgumentError, MinimaxError, PoleError
from .experiments import NAMES, describe, run_experiment
from .io import default_out_dir, fmt, load_rational, read_interpolation, read_points, read_samples, read_support, write_bundle
from .lawson import LawsonConfig, solve

EXIT_OK, EXIT_INPUT, EXIT_MAXIT, EXIT_DEGENERATE = 0, 1, 2, 3
EXIT_FOR = {
    "converged": EXIT_OK,
    "max_iterations": EXIT_MAXIT,
    "degenerate_dual": EXIT_DEGENERATE,
    "conditioning_failure": EXIT_DEGENERATE,
}
SUPPORT = {"aaa": "aaa_greedy", "uniform": "uniform_subset", "explicit": "explicit"}


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="baryminimax", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    fit = sub.add_parser("fit", help="fit a rational minimax approximant to sample data")
    fit.add_argument("--samples", required=True, help="CSV with x_re, x_im, f_re, f_im")
    fit.add_argument("--interp", help="CSV with t_re, t_im, y_re, y_im")
    fit.add_argument("--degree", type=int, help="type (n, n); defaults to the samples' '# degree=N' line")
    fit.add_argument("--max-iter", type=int, default=40)
    fit.add_argument("--rho", type=float, default=1.0)
    fit.add_argument("--tol", type=float, default=1e-10)
    fit.add_argument("--support", choices=sorted(SUPPORT), default="aaa")
    fit.add_argument("--support-file", help="CSV with t_re, t_im of the free support points")
    fit.add_argument("--adaptive-rho", action="store_true")
    fit.add_argument("--out", help="bundle directory (default $MINIMAX_OUT_DIR or ./minimax_out)")
    fit.add_argument("--seed", type=int, help="reserved; the solver is deterministic")

    ex = sub.add_parser("experiment", help="run a built-in experiment")
    ex.add_argument("name", choices=NAMES)
    ex.add_argument("--out", help="output root (default $MINIMAX_OUT_DIR or ./minimax_out)")
    ex.add_argument("--max-iter", type=int, help="override the experiment's iteration budget")

    ev = sub.add_parser("eval", help="evaluate a saved rational at points")
    ev.add_argument("--model", required=True, help="rational.json from a fit bundle")
    ev.add_argument("--points", required=True, help="CSV with x_re, x_im")
    ev.add_argument("--out", help="output CSV (default standard output)")
    return p


def cli_fit(args) -> int:
    try:
        samples, file_degree = read_samples(args.samples)
        interp = read_interpolation(args.interp, samples) if args.interp else None
        n = args.degree if args.degree is not None else file_degree
        if n is None:
            raise ArgumentError("no degree given: pass --degree or add '# degree=N' to the samples file")
        explicit = None
        if args.support == "explicit":
            if not args.support_file:
                raise ArgumentError("--support explicit needs --support-file")
            explicit = tuple(read_support(args.support_file))
        config = LawsonConfig(
            degree_n=n,
            rho=args.rho,
            eps_r=args.tol,
            k_max=args.max_iter,
            support_strategy=SUPPORT[args.support],
            explicit_nodes=explicit,
            adaptive_rho=args.adaptive_rho,
        )
        result = solve(samples, interp, config)
    except ArgumentError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    out = default_out_dir(args.out)
    summary = write_bundle(result, out, {"command": "fit", "argv": sys.argv[1:]})
    print(
        f"termination={summary['termination']} e={fmt(summary.get('max_error', float('nan')))} "
        f"gap={fmt(summary.get('gap', float('nan')))} iterations={summary['iterations']} "
        f"verdict={summary.get('verdict')} out={out}"
    )
    if summary.get("verdict") == "degenerate":
        return EXIT_DEGENERATE
    return EXIT_FOR[result.trace.termination]


def cli_experiment(args) -> int:
    out = default_out_dir(args.out)
    result = run_experiment(args.name, out, k_max=args.max_iter)
    for line in describe(result):
        print(line)
    for row in result.table:
        print(f"n={row['n']} computed={fmt(row['computed'])} reference={fmt(row['reference'])} ratio={fmt(row['ratio'])}")
    bad = any(s["termination"] in ("degenerate_dual", "conditioning_failure") for s in result.summaries.values())
    return EXIT_DEGENERATE if bad else EXIT_OK


def _eval_rows(r, x):
    try:
        with np.errstate(all="ignore"):
            vals = np.asarray(evaluate(r, x), dtype=complex).reshape(-1)
        poles = ~np.isfinite(vals)
        return vals, poles
    except PoleError:
        pass
    vals = np.empty(x.size, dtype=complex)
    poles = np.zeros(x.size, dtype=bool)
    for i, xi in enumerate(x):
        try:
            with np.errstate(all="ignore"):
                vals[i] = evaluate(r, xi)
        except PoleError:
            vals[i] = complex(np.nan, np.nan)
        poles[i] = not np.isfinite(vals[i])
    return vals, poles


def cli_eval(args) -> int:
    try:
        r = load_rational(args.model)
        x = read_points(args.points)
    except ArgumentError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    vals, poles = _eval_rows(r, x)
    fh = open(args.out, "w", newline="") if args.out else sys.stdout
    try:
        wr = csv.writer(fh, lineterminator="\n")
        wr.writerow(["x_re", "x_im", "value_re", "value_im", "pole"])
        for xi, v, p in zip(x, vals, poles):
            wr.writerow([fmt(xi.real), fmt(xi.imag), fmt(v.real), fmt(v.imag), int(p)])
    finally:
        if args.out:
            fh.close()
    return EXIT_OK


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        if args.command == "fit":
            return cli_fit(args)
        if args.command == "experiment":
            return cli_experiment(args)
        return cli_eval(args)
    except MinimaxError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE


if __name__ == "__main__":
    sys.exit(main())
