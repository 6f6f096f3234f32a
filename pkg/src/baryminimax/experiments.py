"""Desk-scale experiments: |x| degree table, constrained examples, sign problem.

Every experiment builds its data deterministically, solves with the
monotone (adaptive rho) Lawson variant starting from rho = 1, and can write
a result bundle per run.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .barycentric import InterpolationData, SampleSet
from .io import bundle_summary, fmt, write_bundle, write_csv
from .lawson import LawsonConfig, SolveResult, solve

# Reference maximum errors for |x| on [-1, 1], m = 20000, 40 iterations.
ABS_X_REFERENCE = {
    4: 8.5506e-03,
    8: 7.4051e-04,
    12: 1.3342e-04,
    16: 1.7130e-05,
    20: 5.8606e-06,
    24: 3.9164e-07,
    28: 5.1226e-08,
    32: 6.2480e-09,
    36: 7.3968e-10,
    40: 1.0765e-10,
}

NAMES = ("abs_x_table", "example2", "example3_cos", "example4_discontinuous", "example6_sign")


@dataclass(frozen=True)
class Problem:
    name: str
    samples: SampleSet
    interp: InterpolationData
    config: LawsonConfig


@dataclass
class ExperimentResult:
    name: str
    runs: dict[str, SolveResult] = field(default_factory=dict)
    summaries: dict[str, dict] = field(default_factory=dict)
    table: list[dict] = field(default_factory=list)


def equispaced(m: int, a: float = -1.0, b: float = 1.0) -> np.ndarray:
    """x_j = a + (b - a) j/(m - 1), j = 0..m-1."""
    j = np.arange(m)
    return a + (b - a) * j / (m - 1)


def f2(x):
    """Two bumps of different shape centered at +/- 0.5."""
    return 1 / np.sqrt(1 + 100 * (x - 0.5) ** 2) + 1 / (1 + 100 * (x + 0.5) ** 2)


def f3(x):
    """1 - sin(pi x)/2 on (0, 1); the constraints pin the endpoints to 0."""
    return 1 - 0.5 * np.sin(np.pi * x)


def _drop(x, nodes):
    return x[~np.isin(x, nodes)]


def abs_x_problems(degrees=tuple(ABS_X_REFERENCE), m=20000, k_max=40) -> list[Problem]:
    x = equispaced(m)
    s = SampleSet(x, np.abs(x))
    return [
        Problem(f"n{n}", s, InterpolationData(), LawsonConfig(n, k_max=k_max, adaptive_rho=True))
        for n in degrees
    ]


def example2_problem(m=20000, k_max=400) -> Problem:
    t = np.array([-1.0, 0.0, 1.0])
    # The grid endpoints coincide with two interpolation nodes; samples there are dropped.
    x = _drop(equispaced(m), t)
    return Problem(
        "example2",
        SampleSet(x, f2(x)),
        InterpolationData(t, f2(t)),
        LawsonConfig(6, k_max=k_max, adaptive_rho=True),
    )


def example3_problem(m=2000, k_max=400) -> Problem:
    x = equispaced(m, 0.0, 1.0)
    return Problem(
        "example3_cos",
        SampleSet(x, np.cos(2 * np.pi * x)),
        InterpolationData([-1.0, -0.7, -0.4], [1.0, 1.0, 1.0]),
        LawsonConfig(8, k_max=k_max, adaptive_rho=True),
    )


def example4_problem(m=2000, k_max=400) -> Problem:
    x = np.arange(1, m + 1) / (m + 1)
    return Problem(
        "example4_discontinuous",
        SampleSet(x, f3(x)),
        InterpolationData([0.0, 1.0], [0.0, 0.0]),
        LawsonConfig(6, k_max=k_max, adaptive_rho=True),
    )


def example6_problems(k_max=40) -> list[Problem]:
    """f = -1 on a vertical segment E, +1 on the unit circle F; type (15, 15)."""
    E = -3 + 1j * np.cos(np.arange(201) * np.pi / 200)
    F = np.exp(2j * np.pi * np.arange(2000) / 2000)
    x = np.concatenate([E, F])
    f = np.concatenate([-np.ones(E.size), np.ones(F.size)])
    cfg = LawsonConfig(15, k_max=k_max, adaptive_rho=True)
    plain = Problem("plain", SampleSet(x, f), InterpolationData(), cfg)
    ends = np.array([E[0], E[-1]])
    keep = ~np.isin(x, ends)
    constrained = Problem(
        "endpoints", SampleSet(x[keep], f[keep]), InterpolationData(ends, [-1.0, -1.0]), cfg
    )
    return [plain, constrained]


def problems(name: str, k_max: int | None = None) -> list[Problem]:
    kw = {} if k_max is None else {"k_max": k_max}
    if name == "abs_x_table":
        return abs_x_problems(**kw)
    if name == "example2":
        return [example2_problem(**kw)]
    if name == "example3_cos":
        return [example3_problem(**kw)]
    if name == "example4_discontinuous":
        return [example4_problem(**kw)]
    if name == "example6_sign":
        return example6_problems(**kw)
    raise ValueError(f"unknown experiment {name!r}; choose from {', '.join(NAMES)}")


def abs_x_comparison(result: ExperimentResult) -> list[dict]:
    rows = []
    for key, run in result.runs.items():
        n = run.config.degree_n
        e = run.trace.records[-1].e
        ref = ABS_X_REFERENCE.get(n)
        rows.append(
            {
                "n": n,
                "computed": e,
                "reference": ref,
                "rel_diff": (e - ref) / ref if ref else float("nan"),
                "ratio": e / ref if ref else float("nan"),
                "termination": run.trace.termination,
            }
        )
    return rows


def run_experiment(name: str, out_dir=None, k_max: int | None = None, keep_history=False) -> ExperimentResult:
    """Solve every run of an experiment and optionally write bundles.

    Bundles go to ``out_dir/<name>/<run>/``; ``abs_x_table`` also writes
    ``comparison.csv`` with computed and reference errors side by side.
    """
    result = ExperimentResult(name)
    for prob in problems(name, k_max):
        cfg = replace(prob.config, keep_history=keep_history) if keep_history else prob.config
        run = solve(prob.samples, prob.interp, cfg)
        result.runs[prob.name] = run
        if out_dir is not None:
            meta = {"experiment": name, "run": prob.name}
            result.summaries[prob.name] = write_bundle(run, Path(out_dir) / name / prob.name, meta)
        else:
            result.summaries[prob.name] = bundle_summary(run)
    if name == "abs_x_table":
        result.table = abs_x_comparison(result)
        if out_dir is not None:
            write_csv(
                Path(out_dir) / name / "comparison.csv",
                ["n", "computed", "reference", "rel_diff", "ratio", "termination"],
                [(r["n"], float(r["computed"]), r["reference"], r["rel_diff"], r["ratio"], r["termination"])
                 for r in result.table],
            )
    if out_dir is not None:
        with open(Path(out_dir) / name / "summary.json", "w") as fh:
            json.dump(result.summaries, fh, indent=2, sort_keys=True)
            fh.write("\n")
    return result


def describe(result: ExperimentResult) -> list[str]:
    """One line per run with the headline numbers."""
    lines = []
    for key, s in result.summaries.items():
        e = s.get("max_error", float("nan"))
        gap = s.get("gap", float("nan"))
        lines.append(
            f"{result.name}/{key}: termination={s['termination']} e={fmt(e)} gap={fmt(gap)} "
            f"iterations={s['iterations']} extreme_count={s.get('extreme_count')} verdict={s.get('verdict')}"
        )
    return lines
