"""Error curves, extreme points and duality certificates for a computed fit."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .barycentric import (
    BarycentricRational,
    InterpolationData,
    SampleSet,
    evaluate,
    evaluate_on_samples,
)
from .dual import DualEvaluation
from .errors import ArgumentError

PROBE_OFFSET = 1e-9
SLACKNESS_TOL = 1e-6
WEAK_DUALITY_TOL = 1e-10


@dataclass(frozen=True)
class ErrorReport:
    """Residuals of a rational against samples and interpolation data.

    ``interp_residuals`` averages the two probes at t_j +/- delta with
    delta = 1e-9 (1 + |t_j|), so the first-order term xi'(t_j) delta cancels
    and only a genuine violation remains. ``interp_residuals_offset`` is the
    one-sided probe at t_j + delta.
    """

    residuals: np.ndarray
    max_error: float
    argmax: np.ndarray
    interp_residuals: np.ndarray
    interp_residuals_offset: np.ndarray
    interpolation_valid: bool


@dataclass(frozen=True)
class ExtremePointSet:
    indices: np.ndarray
    threshold: float
    raw_count: int

    @property
    def cardinality(self) -> int:
        return int(self.indices.size)


@dataclass(frozen=True)
class DualityCertificate:
    d: float
    primal: float
    gap: float
    slackness: float
    psd_margin: float | None
    weak_duality: bool
    verdict: str

    def to_dict(self) -> dict:
        return {
            "d": self.d,
            "primal": self.primal,
            "gap": self.gap,
            "slackness": self.slackness,
            "psd_margin": self.psd_margin,
            "weak_duality": self.weak_duality,
            "verdict": self.verdict,
        }


@dataclass(frozen=True)
class BoundCheck:
    cardinality: int
    proved_bound: int
    observed_bound: int

    @property
    def holds(self) -> bool:
        return self.cardinality >= self.proved_bound

    @property
    def meets_observed(self) -> bool:
        return self.cardinality >= self.observed_bound

    def __bool__(self):
        return self.holds


def interpolation_probe(r: BarycentricRational, interp: InterpolationData, offset=PROBE_OFFSET):
    """Symmetric and one-sided probe residuals at each interpolation node."""
    t, y = interp.nodes, interp.values
    if t.size == 0:
        empty = np.zeros(0)
        return empty, empty
    delta = offset * (1.0 + np.abs(t))
    right = np.asarray(evaluate(r, t + delta))
    left = np.asarray(evaluate(r, t - delta))
    return np.abs(0.5 * (right + left) - y), np.abs(right - y)


def error_report(r: BarycentricRational, samples: SampleSet, interp: InterpolationData | None = None) -> ErrorReport:
    """Residuals |f_j - xi(x_j)|, their maximum, and interpolation probes."""
    interp = interp if interp is not None else InterpolationData()
    res = np.abs(samples.values - evaluate_on_samples(r, samples))
    e = float(res.max()) if res.size else 0.0
    sym, one = interpolation_probe(r, interp)
    return ErrorReport(
        residuals=res,
        max_error=e,
        argmax=np.nonzero(res == e)[0],
        interp_residuals=sym,
        interp_residuals_offset=one,
        interpolation_valid=r.interpolation_valid(),
    )


def _ordered_real(nodes) -> bool:
    nodes = np.asarray(nodes, dtype=complex)
    return bool(np.all(nodes.imag == 0) and np.all(np.diff(nodes.real) > 0))


def extreme_points(report: ErrorReport, threshold: float, collapse: bool = True, nodes=None) -> ExtremePointSet:
    """Samples whose residual is within ``threshold`` (relative) of the maximum.

    With ``collapse`` and an increasing real ``nodes`` grid, each run of
    adjacent indices counts once and is represented by its largest residual.
    """
    if not 0 < threshold < 1:
        raise ArgumentError(f"threshold must lie in (0, 1), got {threshold}")
    res = report.residuals
    idx = np.nonzero(res >= (1.0 - threshold) * report.max_error)[0]
    raw = int(idx.size)
    if collapse and nodes is not None and idx.size > 1 and _ordered_real(nodes):
        runs = np.split(idx, np.nonzero(np.diff(idx) > 1)[0] + 1)
        idx = np.array([run[np.argmax(res[run])] for run in runs], dtype=int)
    return ExtremePointSet(idx, threshold, raw)


def duality_certificate(
    dual_eval: DualEvaluation,
    report: ErrorReport,
    w,
    eps_r: float = 1e-10,
    slackness_tol: float = SLACKNESS_TOL,
    exact_tol: float = 0.0,
    null_dual_tol: float = 0.0,
) -> DualityCertificate:
    """Compare sqrt(d(w)) with e(xi) and check complementary slackness.

    The verdict is ``degenerate`` when the dual minimizer is not unique,
    ``certified`` when the relative gap is at most ``eps_r`` and
    max_j w_j |e - r_j| is at most ``slackness_tol * e``, else ``gap_open``.
    Exact fits, where the relative gap is rounding noise, are certified too:
    either ``e <= exact_tol``, or ``e <= null_dual_tol`` with a rank-deficient
    dual.
    """
    w = np.asarray(w, dtype=float)
    if w.shape != report.residuals.shape:
        raise ArgumentError(f"weights {w.shape} and residuals {report.residuals.shape} differ")
    e = report.max_error
    d = dual_eval.d
    if e > 0:
        gap = abs(math.sqrt(d) - e) / e
    else:
        gap = 0.0 if d == 0 else math.inf
    slack = float(np.max(w * np.abs(e - report.residuals))) if w.size else 0.0
    weak = d <= e * e * (1 + WEAK_DUALITY_TOL) or d == 0
    if dual_eval.degenerate:
        verdict = "degenerate"
    elif (
        (gap <= eps_r and slack <= slackness_tol * e)
        or e <= exact_tol
        or (dual_eval.rank_deficient and e <= null_dual_tol)
    ):
        verdict = "certified"
    else:
        verdict = "gap_open"
    return DualityCertificate(d, e * e, gap, slack, dual_eval.psd_margin, bool(weak), verdict)


def theorem_bound_check(points: ExtremePointSet, n: int, ell: int) -> BoundCheck:
    """Compare the extreme-point count with n+2-ell (proved) and 2n+2-ell (observed)."""
    return BoundCheck(points.cardinality, n + 2 - ell, 2 * n + 2 - ell)
