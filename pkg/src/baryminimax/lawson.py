"""Barycentric dual Lawson iteration for constrained rational minimax fits.

Each step evaluates the dual function at the current weights, measures the
primal error of the resulting rational, stops once the two agree to a
relative tolerance, and otherwise reweights samples by their residuals.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from .barycentric import (
    BarycentricRational,
    InterpolationData,
    SampleSet,
    SupportPoints,
)
from .dual import (
    RANK_FLOOR,
    W_FLOOR,
    DualEvaluation,
    build_basis,
    dual_value_fast,
    dual_value_oracle,
)
from .errors import (
    ArgumentError,
    ConditioningError,
    DegeneratePencilError,
    ExactFit,
    PreconditionError,
)

SupportStrategy = Literal["aaa_greedy", "uniform_subset", "explicit"]
Termination = Literal["converged", "max_iterations", "degenerate_dual", "conditioning_failure"]

POLE_GUARD = 1e-300
EXACT_FIT_TOL = 1e-14
# Once d(w) is numerically zero the relative gap is rounding noise; accept
# residuals at this level as an exact fit.
NULL_DUAL_FIT_TOL = 1e-10
COLLISION_FRACTION = 1e-2
COLLISION_RETRIES = 3


@dataclass(frozen=True)
class LawsonConfig:
    """Solver settings.

    ``perturbation_scale`` defaults to 1/(10 m). With ``adaptive_rho`` the
    exponent is halved, never below ``rho * rho_min_factor``, whenever a step
    would lower the dual value by more than
    ``min(ascent_slack, ascent_rel_slack * d)``.
    """

    degree_n: int
    rho: float = 1.0
    eps_r: float = 1e-10
    k_max: int = 40
    support_strategy: SupportStrategy = "aaa_greedy"
    perturbation_scale: float | None = None
    explicit_nodes: tuple | None = None
    adaptive_rho: bool = False
    w_floor: float = W_FLOOR
    rank_floor: float = RANK_FLOOR
    extreme_threshold: float = 1e-2
    rho_min_factor: float = 2.0**-10
    ascent_slack: float = 1e-14
    ascent_rel_slack: float = 1e-12
    keep_history: bool = False

    def __post_init__(self):
        if int(self.degree_n) != self.degree_n or self.degree_n < 0:
            raise ArgumentError(f"degree_n must be a nonnegative integer, got {self.degree_n}")
        if not 0 < self.rho <= 1:
            raise ArgumentError(f"rho must lie in (0, 1], got {self.rho}")
        if not self.eps_r > 0:
            raise ArgumentError(f"eps_r must be positive, got {self.eps_r}")
        if int(self.k_max) != self.k_max or self.k_max < 1:
            raise ArgumentError(f"k_max must be a positive integer, got {self.k_max}")
        if self.support_strategy not in ("aaa_greedy", "uniform_subset", "explicit"):
            raise ArgumentError(f"unknown support strategy {self.support_strategy!r}")
        if self.perturbation_scale is not None and not self.perturbation_scale > 0:
            raise ArgumentError("perturbation_scale must be positive")
        if not 0 < self.extreme_threshold < 1:
            raise ArgumentError("extreme_threshold must lie in (0, 1)")


@dataclass(frozen=True)
class IterationRecord:
    k: int
    d: float
    e: float
    gap: float
    active_weights: int
    sigma_gap: float
    rho: float
    path: str


@dataclass
class IterationTrace:
    records: list[IterationRecord] = field(default_factory=list)
    termination: Termination | None = None
    message: str = ""
    best_index: int | None = None
    weights: list[np.ndarray] = field(default_factory=list)
    rationals: list[BarycentricRational] = field(default_factory=list)

    def __len__(self):
        return len(self.records)

    def column(self, name) -> np.ndarray:
        return np.array([getattr(r, name) for r in self.records])


@dataclass
class SolveResult:
    rational: BarycentricRational | None
    trace: IterationTrace
    weights: np.ndarray
    dual: DualEvaluation | None
    samples: SampleSet
    interp: InterpolationData
    config: LawsonConfig

    @property
    def converged(self) -> bool:
        return self.trace.termination == "converged"

    def error_report(self):
        from .diagnostics import error_report

        return error_report(self.rational, self.samples, self.interp)

    def certificate(self, **kwargs):
        from .diagnostics import duality_certificate

        kwargs.setdefault("eps_r", self.config.eps_r)
        scale = 1.0 + float(np.abs(self.samples.values).max())
        kwargs.setdefault("exact_tol", EXACT_FIT_TOL * scale)
        kwargs.setdefault("null_dual_tol", NULL_DUAL_FIT_TOL * scale)
        return duality_certificate(self.dual, self.error_report(), self.weights, **kwargs)

    def extreme_points(self, threshold=None, collapse=True):
        from .diagnostics import extreme_points

        thr = self.config.extreme_threshold if threshold is None else threshold
        return extreme_points(self.error_report(), thr, collapse=collapse, nodes=self.samples.nodes)


def _aaa_indices(x: np.ndarray, f: np.ndarray, k: int) -> list[int]:
    """Greedy AAA node choice with unit weights; ties go to the lowest index."""
    m = x.size
    chosen: list[int] = []
    free = np.ones(m, dtype=bool)
    approx = np.full(m, f.mean(), dtype=complex)
    for _ in range(k):
        res = np.where(free, np.abs(f - approx), -1.0)
        j = int(np.argmax(res))
        chosen.append(j)
        free[j] = False
        z, fz = x[chosen], f[chosen]
        C = 1.0 / (x[free, None] - z[None, :])
        L = f[free, None] * C - C * fz[None, :]
        if L.shape[0] == 0:
            break
        _, _, Vh = np.linalg.svd(L, full_matrices=L.shape[0] < L.shape[1])
        wt = Vh[-1].conj()
        approx = f.astype(complex)
        with np.errstate(divide="ignore", invalid="ignore"):
            approx[free] = (C @ (wt * fz)) / (C @ wt)
        approx[~np.isfinite(approx)] = np.inf
    return chosen


def _min_separation(t: np.ndarray, others: np.ndarray) -> float:
    out = np.inf
    if others.size:
        out = float(np.abs(t[:, None] - others[None, :]).min())
    if t.size > 1:
        D = np.abs(t[:, None] - t[None, :])
        np.fill_diagonal(D, np.inf)
        out = min(out, float(D.min()))
    return out


def select_support_points(
    samples: SampleSet, interp: InterpolationData, config: LawsonConfig
) -> SupportPoints:
    """Choose the n+1-ell free support points.

    Greedy and uniform strategies pick sample nodes and shift them by
    ``perturbation_scale``. A shifted node closer than 1% of the shift to a
    sample or another support point triggers a retry with the shift doubled.
    """
    n, ell, m = config.degree_n, interp.ell, samples.m
    k = n + 1 - ell
    if k < 0:
        raise ArgumentError(f"{ell} interpolation conditions exceed n+1 = {n + 1}")
    if k == 0:
        return SupportPoints(interp.nodes, np.zeros(0, complex))
    if config.support_strategy == "explicit":
        if config.explicit_nodes is None:
            raise ArgumentError("explicit support strategy needs explicit_nodes")
        free = np.asarray(config.explicit_nodes, dtype=complex).ravel()
        if free.size != k:
            raise ArgumentError(f"got {free.size} explicit support points, need {k}")
        sp = SupportPoints(interp.nodes, free)
        sp.check_disjoint(samples)
        return sp
    if m < k:
        raise ArgumentError(f"need at least {k} samples to pick support points, got {m}")
    if config.support_strategy == "aaa_greedy":
        idx = _aaa_indices(samples.nodes, samples.values, k)
    else:
        idx = [int(i) for i in np.round(np.linspace(0, m - 1, k))]
    base = samples.nodes[idx]
    shift = config.perturbation_scale or 1.0 / (10 * m)
    others = np.concatenate([samples.nodes, interp.nodes])
    for _ in range(COLLISION_RETRIES + 1):
        free = base + shift
        if _min_separation(free, others) >= COLLISION_FRACTION * shift:
            return SupportPoints(interp.nodes, free)
        shift *= 2
    raise ArgumentError(
        f"perturbed support points collide with samples after {COLLISION_RETRIES} retries"
    )


def initialize_weights(m: int) -> np.ndarray:
    """Uniform simplex point; the last entry absorbs rounding."""
    if m < 1:
        raise ArgumentError("need at least one weight")
    w = np.full(m, 1.0 / m)
    w[-1] = 1.0 - math.fsum(w[:-1])
    return w


def lawson_update(w, residuals, rho: float) -> np.ndarray:
    """Multiplicative reweighting ``w_j |r_j|^rho``, renormalized to sum one.

    Raises ExactFit when every reweighted entry vanishes.
    """
    w = np.asarray(w, dtype=float)
    r = np.asarray(residuals, dtype=float)
    if w.shape != r.shape:
        raise ArgumentError(f"weights {w.shape} and residuals {r.shape} differ in shape")
    if np.any(r < 0) or not np.all(np.isfinite(r)):
        raise ArgumentError("residuals must be finite and nonnegative")
    if not 0 < rho <= 1:
        raise ArgumentError(f"rho must lie in (0, 1], got {rho}")
    u = w * r**rho
    total = u.sum()
    if total == 0:
        raise ExactFit("all weighted residuals vanish")
    return u / total


class _Stop(Exception):
    def __init__(self, reason, message):
        self.reason = reason
        self.message = message


def _dual(basis, samples, w, config) -> DualEvaluation:
    try:
        return dual_value_fast(basis, samples, w, rank_floor=config.rank_floor, w_floor=config.w_floor)
    except ConditioningError as exc:
        try:
            return dual_value_oracle(basis, samples, w, rank_floor=config.rank_floor)
        except (DegeneratePencilError, np.linalg.LinAlgError) as exc2:
            raise _Stop("conditioning_failure", f"{exc}; oracle fallback failed: {exc2}") from exc2
    except PreconditionError as exc:
        raise _Stop("conditioning_failure", str(exc)) from exc


def _residuals(ev: DualEvaluation, f: np.ndarray) -> np.ndarray:
    q = ev.q_at_samples
    bad = np.nonzero(np.abs(q) < POLE_GUARD)[0]
    if bad.size:
        raise _Stop("conditioning_failure", f"denominator vanishes at sample {int(bad[0])}")
    return np.abs(f - ev.p_at_samples / q)


def check_problem(samples: SampleSet, interp: InterpolationData, n: int):
    """Validate disjointness and the sample-count requirement m >= 2n+2-ell."""
    ell = interp.ell
    if ell > n + 1:
        raise ArgumentError(f"{ell} interpolation conditions exceed n+1 = {n + 1}")
    interp.check_disjoint(samples)
    need = 2 * n + 2 - ell
    if samples.m < need:
        raise ArgumentError(
            f"degree {n} with {ell} interpolation conditions needs m >= 2n+2-ell = {need} "
            f"samples, got {samples.m}"
        )


def solve(samples: SampleSet, interp: InterpolationData | None, config: LawsonConfig) -> SolveResult:
    """Run the Lawson iteration and return the last iterate.

    Conditioning and degeneracy problems end the run with a termination
    reason instead of raising; the partial trace is kept.
    """
    interp = interp if interp is not None else InterpolationData()
    check_problem(samples, interp, config.degree_n)
    support = select_support_points(samples, interp, config)
    basis = build_basis(samples, support, interp.values)
    f = samples.values
    scale = 1.0 + float(np.abs(f).max())
    exact_tol = EXACT_FIT_TOL * scale
    trace = IterationTrace()
    w = initialize_weights(samples.m)
    rho = config.rho
    rho_min = config.rho * config.rho_min_factor
    ev = None
    try:
        ev = _dual(basis, samples, w, config)
        for k in range(config.k_max + 1):
            res = _residuals(ev, f)
            e = float(res.max())
            gap = abs(math.sqrt(ev.d) - e) / e if e > 0 else 0.0
            trace.records.append(
                IterationRecord(
                    k, ev.d, e, gap, int(np.count_nonzero(w > config.w_floor)), ev.sigma_gap, rho, ev.path
                )
            )
            if config.keep_history:
                trace.weights.append(w.copy())
                trace.rationals.append(ev.rational)
            if ev.degenerate:
                raise _Stop("degenerate_dual", "dual minimizer is not unique (d(w) = 0)")
            if e <= exact_tol:
                raise _Stop("converged", "exact fit")
            if ev.rank_deficient and e <= NULL_DUAL_FIT_TOL * scale:
                raise _Stop("converged", "exact fit (d(w) numerically zero)")
            if gap < config.eps_r:
                raise _Stop("converged", f"relative duality gap {gap:.3e} below {config.eps_r:g}")
            if k == config.k_max:
                raise _Stop("max_iterations", f"stopped after {k} iterations")
            try:
                w_new = lawson_update(w, res, rho)
                ev_new = _dual(basis, samples, w_new, config)
                if config.adaptive_rho:
                    slack = min(config.ascent_slack, config.ascent_rel_slack * ev.d)
                    while ev_new.d < ev.d - slack and rho / 2 >= rho_min:
                        rho /= 2
                        w_new = lawson_update(w, res, rho)
                        ev_new = _dual(basis, samples, w_new, config)
            except ExactFit:
                raise _Stop("converged", "exact fit on every weighted sample")
            w, ev = w_new, ev_new
    except _Stop as stop:
        trace.termination = stop.reason
        trace.message = stop.message
    if trace.records:
        trace.best_index = int(np.argmin(trace.column("e")))
    return SolveResult(
        rational=ev.rational if ev is not None else None,
        trace=trace,
        weights=w,
        dual=ev,
        samples=samples,
        interp=interp,
        config=config,
    )
