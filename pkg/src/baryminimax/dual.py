"""The dual function d(w) and its minimizing coefficient vector.

For weights w on the simplex,

    d(w) = min ||sqrt(W) [C_p, -F C_q] N c||^2  s.t.  ||sqrt(W) [0, C_q] N c|| = 1,

where N encodes the shared coefficients of the constrained support points.
``dual_value_fast`` reduces this to one smallest-singular-pair problem after
two thin QR factorizations; ``dual_value_oracle`` solves the dense
generalized eigenproblem instead and is meant for testing.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .barycentric import (
    BarycentricRational,
    SampleSet,
    SupportPoints,
    assemble_from_coefficients,
    find_coincidences,
)
from .errors import (
    ArgumentError,
    ConditioningError,
    DegeneratePencilError,
    PreconditionError,
    SingularMatrixError,
)
from .linalg import (
    apply_complement_projector,
    condition_estimate,
    hermitian_definite_gevp_min,
    smallest_singular_pair,
    solve_upper_triangular,
    thin_qr,
)

W_FLOOR = 1e-15
RANK_FLOOR = 1e-14
SIMPLEX_TOL = 1e-12
PSD_TOL = 1e-9


@dataclass(frozen=True)
class BasisMatrices:
    """Cauchy basis matrices; the first ``ell`` columns of Cp carry y."""

    Cp: np.ndarray
    Cq: np.ndarray
    ell: int
    support: SupportPoints
    interp_values: np.ndarray

    @property
    def m(self) -> int:
        return self.Cq.shape[0]

    @property
    def n(self) -> int:
        return self.Cq.shape[1] - 1


@dataclass(frozen=True)
class DualEvaluation:
    """Result of one dual-function evaluation at a weight vector."""

    d: float
    c: np.ndarray
    rational: BarycentricRational
    p_at_samples: np.ndarray
    q_at_samples: np.ndarray
    sigma_gap: float
    sigma_min: float
    sigma_second: float
    sigma_max: float
    rank_floor: float
    path: str = "fast"
    psd_margin: float | None = None

    @property
    def rank_deficient(self) -> bool:
        """sigma_min at or below the rank floor (d(w) numerically zero)."""
        return self.sigma_max == 0 or self.sigma_min <= self.rank_floor * self.sigma_max

    @property
    def degenerate(self) -> bool:
        """Rank deficient with a non-unique minimizer.

        A generic exact fit has a one-dimensional null space and a unique
        solution; a degenerate dual (e.g. f = 0) has a larger one.
        """
        if not self.rank_deficient:
            return False
        return self.sigma_max == 0 or self.sigma_second <= self.rank_floor * self.sigma_max


def build_basis(samples: SampleSet, support: SupportPoints, interp_values) -> BasisMatrices:
    """Cq[j, i] = 1/(x_j - t_i); Cp equals Cq with column i <= ell scaled by y_i."""
    y = np.atleast_1d(np.asarray(interp_values, dtype=complex))
    ell = support.ell
    if y.size != ell:
        raise ArgumentError(f"{y.size} interpolation values for {ell} constrained nodes")
    t = support.nodes
    hits = find_coincidences(samples.nodes, t)
    if hits:
        j, i = hits[0]
        raise ArgumentError(f"sample node {j} coincides with support point {i} ({t[i]!r})")
    Cq = 1.0 / (samples.nodes[:, None] - t[None, :])
    Cp = Cq.copy()
    Cp[:, :ell] *= y[None, :]
    return BasisMatrices(Cp, Cq, ell, support, y)


def constraint_matrix_apply(M, ell: int) -> np.ndarray:
    """Right-multiply ``M = [A1, A2, A3, A4]`` by N, giving [A1 + A3, A2, A4].

    A1, A3 have ``ell`` columns and A2, A4 have n+1-ell columns.
    """
    M = np.asarray(M, dtype=complex)
    if M.ndim != 2 or M.shape[1] % 2:
        raise ArgumentError(f"expected an even column count, got shape {M.shape}")
    n1 = M.shape[1] // 2
    if not 0 <= ell <= n1:
        raise ArgumentError(f"ell={ell} outside [0, {n1}]")
    return np.hstack([M[:, :ell] + M[:, n1 : n1 + ell], M[:, ell:n1], M[:, n1 + ell :]])


def check_weights(w, m: int, n: int | None = None, w_floor: float = W_FLOOR) -> np.ndarray:
    """Validate a simplex weight vector; with ``n``, require n+1 active weights."""
    w = np.asarray(w, dtype=float)
    if w.shape != (m,):
        raise ArgumentError(f"weights have shape {w.shape}, expected ({m},)")
    if not np.all(np.isfinite(w)) or np.any(w < 0):
        raise ArgumentError("weights must be finite and nonnegative")
    if abs(w.sum() - 1.0) > SIMPLEX_TOL:
        raise ArgumentError(f"weights sum to {w.sum():.17g}, not 1")
    if n is not None:
        active = int(np.count_nonzero(w > w_floor))
        if active < n + 1:
            raise PreconditionError(f"{active} weights above {w_floor:g}, need at least {n + 1}")
    return w


def _fix_phase(c: np.ndarray) -> np.ndarray:
    j = int(np.argmax(np.abs(c)))
    if c[j] == 0:
        return c
    c = c * (abs(c[j]) / c[j])
    c[j] = abs(c[j])
    return c


def _evaluation(basis, c, pair, path, rank_floor, psd_margin=None) -> DualEvaluation:
    c = _fix_phase(c)
    r = assemble_from_coefficients(basis.support, basis.interp_values, c)
    p = basis.Cq @ r.numerator_weights
    q = basis.Cq @ r.beta
    smin, second, smax = pair
    d = smin * smin
    return DualEvaluation(
        d=float(d),
        c=c,
        rational=r,
        p_at_samples=p,
        q_at_samples=q,
        sigma_gap=float(second - smin),
        sigma_min=float(smin),
        sigma_second=float(second),
        sigma_max=float(smax),
        rank_floor=rank_floor,
        path=path,
        psd_margin=psd_margin,
    )


def _factor_denominator(sw, Cq):
    Qq, Rq = thin_qr(sw[:, None] * Cq)
    k = Rq.shape[0]
    d = np.abs(np.diag(Rq))
    if d.max() == 0 or d.min() < k * np.finfo(float).eps * d.max():
        raise ConditioningError("sqrt(W) C_q is numerically rank deficient", condition_estimate(Rq))
    return Qq, Rq


def _rsolve(Mx, R):
    """Mx R^{-1} via a triangular solve on the transposed system."""
    return scipy.linalg.solve_triangular(R, Mx.T, trans="T", lower=False).T


def dual_value_fast(
    basis: BasisMatrices,
    samples: SampleSet,
    w,
    *,
    rank_floor: float = RANK_FLOOR,
    w_floor: float = W_FLOOR,
    specialized: bool = True,
) -> DualEvaluation:
    """Evaluate d(w) through QR factorizations and one small SVD.

    Parameters
    ----------
    basis, samples
        Basis matrices and the samples they were built from.
    w
        Simplex weights with at least n+1 entries above ``w_floor``.
    rank_floor
        Relative floor on sigma_min below which the result is flagged
        rank deficient.
    specialized
        Use the simplified formulas when ell = 0 or ell = n+1. The general
        formula is used otherwise and gives the same answer.

    Raises
    ------
    PreconditionError
        Too few positive weights.
    ConditioningError
        ``sqrt(W) C_q`` or ``sqrt(W) C_p2`` is numerically rank deficient.
    """
    m, n1 = basis.Cq.shape
    if samples.m != m:
        raise ArgumentError(f"basis has {m} rows, samples have {samples.m}")
    w = check_weights(w, m, n1 - 1, w_floor)
    ell = basis.ell
    f = samples.values
    sw = np.sqrt(w)
    Cq = basis.Cq
    Qq, Rq = _factor_denominator(sw, Cq)

    if specialized and ell == 0:
        M = apply_complement_projector(Qq, f[:, None] * Qq)
        pair = smallest_singular_pair(M)
        beta = solve_upper_triangular(Rq, pair.v)
        alpha = solve_upper_triangular(Rq, Qq.conj().T @ (f * (Qq @ pair.v)))
        c = np.concatenate([alpha, beta])
    elif specialized and ell == n1:
        A = sw[:, None] * (basis.Cp - f[:, None] * Cq)
        pair = smallest_singular_pair(_rsolve(A, Rq))
        c = solve_upper_triangular(Rq, pair.v)
    else:
        A1 = np.hstack([basis.Cp[:, :ell] - f[:, None] * Cq[:, :ell], -f[:, None] * Cq[:, ell:]])
        SA = sw[:, None] * A1
        if ell < n1:
            Qp, Rp = thin_qr(sw[:, None] * basis.Cp[:, ell:])
        else:
            Qp = np.zeros((m, 0), dtype=complex)
            Rp = np.zeros((0, 0), dtype=complex)
        M = _rsolve(apply_complement_projector(Qp, SA), Rq)
        pair = smallest_singular_pair(M)
        ch = solve_upper_triangular(Rq, pair.v)
        try:
            c2 = -solve_upper_triangular(Rp, Qp.conj().T @ (SA @ ch))
        except SingularMatrixError as exc:
            raise ConditioningError(
                "sqrt(W) C_p2 is numerically rank deficient", condition_estimate(Rp)
            ) from exc
        c = np.concatenate([ch[:ell], c2, ch[ell:]])
    return _evaluation(basis, c, (pair.sigma_min, pair.second, pair.sigma_max), "fast", rank_floor)


def dense_pencil(basis: BasisMatrices, samples: SampleSet, w):
    """Return A = sqrt(W)[C_p, -F C_q]N and B = sqrt(W)[0, C_q]N."""
    sw = np.sqrt(np.asarray(w, dtype=float))[:, None]
    Cq = basis.Cq
    f = samples.values[:, None]
    A = constraint_matrix_apply(sw * np.hstack([basis.Cp, -f * Cq]), basis.ell)
    B = constraint_matrix_apply(sw * np.hstack([np.zeros_like(Cq), Cq]), basis.ell)
    return A, B


def dual_value_oracle(
    basis: BasisMatrices,
    samples: SampleSet,
    w,
    *,
    rank_floor: float = RANK_FLOOR,
) -> DualEvaluation:
    """Evaluate d(w) from the dense pencil (A^H A, B^H B).

    Also records the smallest eigenvalue of ``A^H A - d B^H B`` as
    ``psd_margin``; a value below ``-1e-9 ||A^H A||`` raises.
    """
    m = basis.m
    if samples.m != m:
        raise ArgumentError(f"basis has {m} rows, samples have {samples.m}")
    w = check_weights(w, m)
    A, B = dense_pencil(basis, samples, w)
    Ah = A.conj().T @ A
    Bh = B.conj().T @ B
    lam, c = hermitian_definite_gevp_min(Ah, Bh)
    c = c / np.linalg.norm(B @ c)
    # Rayleigh quotient from the unsquared factors; second-order accurate in c.
    d = float(np.linalg.norm(A @ c) ** 2) if lam > 0 else 0.0
    K = Ah - d * Bh
    margin = float(np.linalg.eigvalsh((K + K.conj().T) / 2).min())
    if margin < -PSD_TOL * np.linalg.norm(Ah, 2):
        raise DegeneratePencilError(f"A^H A - d B^H B has eigenvalue {margin:.3e}")
    smax = float(np.linalg.norm(A, 2))
    smin = float(np.sqrt(d))
    # The oracle does not resolve the second singular value; report it as unknown.
    return _evaluation(basis, c, (smin, np.inf, smax), "oracle", rank_floor, margin)
