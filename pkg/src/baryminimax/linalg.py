"""Dense complex kernels used by the dual solver.

Thin QR and the SVD are LAPACK-backed (numpy); the phase conventions and
error reporting live here. ``hermitian_definite_gevp_min`` is a brute-force
oracle and is never called on the production path.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np
import scipy.linalg

from .errors import ArgumentError, DegeneratePencilError, SingularMatrixError

EPS = np.finfo(float).eps


class SingularPair(NamedTuple):
    sigma_min: float
    v: np.ndarray
    gap: float
    sigma_max: float
    second: float


def _as_matrix(M) -> np.ndarray:
    M = np.asarray(M, dtype=complex)
    if M.ndim != 2:
        raise ArgumentError(f"expected a 2-D matrix, got shape {M.shape}")
    return M


def thin_qr(M):
    """Thin Householder QR without pivoting.

    The phases are normalized so that ``diag(R)`` is real and nonnegative,
    which makes the factorization unique for full-rank ``M``.
    """
    M = _as_matrix(M)
    m, k = M.shape
    if m < k:
        raise ArgumentError(f"thin_qr needs rows >= cols, got {m}x{k}")
    if k == 0:
        return np.zeros((m, 0), dtype=complex), np.zeros((0, 0), dtype=complex)
    Q, R = np.linalg.qr(M, mode="reduced")
    d = np.diag(R)
    phase = np.ones(k, dtype=complex)
    nz = np.abs(d) > 0
    phase[nz] = d[nz] / np.abs(d[nz])
    Q = Q * phase[None, :]
    R = R * phase.conj()[:, None]
    R[np.diag_indices(k)] = np.abs(d)
    return Q, R


def condition_estimate(R) -> float:
    """2-norm condition number of a square triangular factor."""
    R = _as_matrix(R)
    if R.shape[0] == 0:
        return 1.0
    s = np.linalg.svd(R, compute_uv=False)
    if s[-1] == 0:
        return np.inf
    return float(s[0] / s[-1])


def smallest_singular_pair(M) -> SingularPair:
    """Smallest singular value of ``M`` and a unit right singular vector.

    ``gap`` is the difference between the two smallest singular values
    (``inf`` when ``M`` has one column). The vector's phase is fixed so its
    largest-modulus entry is real positive.
    """
    M = _as_matrix(M)
    m, k = M.shape
    if m < k:
        raise ArgumentError(f"smallest_singular_pair needs rows >= cols, got {m}x{k}")
    if k == 0:
        raise ArgumentError("matrix has no columns")
    _, s, Vh = np.linalg.svd(M, full_matrices=False)
    v = Vh[-1].conj()
    j = int(np.argmax(np.abs(v)))
    v = v * (abs(v[j]) / v[j])
    v[j] = abs(v[j])
    second = float(s[-2]) if k > 1 else np.inf
    gap = second - float(s[-1])
    return SingularPair(float(s[-1]), v, gap, float(s[0]), second)


def solve_upper_triangular(R, rhs, floor=None):
    """Solve ``R x = rhs`` by back substitution.

    Raises SingularMatrixError when a diagonal entry falls below ``floor``
    (default ``n * eps * max|R_ii|``).
    """
    R = _as_matrix(R)
    k = R.shape[0]
    if R.shape[1] != k:
        raise ArgumentError(f"R must be square, got {R.shape}")
    rhs = np.asarray(rhs, dtype=complex)
    if rhs.shape[0] != k:
        raise ArgumentError(f"rhs has {rhs.shape[0]} rows, R has {k}")
    if k == 0:
        return rhs.copy()
    d = np.abs(np.diag(R))
    if floor is None:
        floor = k * EPS * d.max()
    bad = np.nonzero(d < floor)[0]
    if bad.size or d.max() == 0:
        i = int(bad[0]) if bad.size else 0
        raise SingularMatrixError(i, float(d[i]), float(floor))
    return scipy.linalg.solve_triangular(R, rhs, lower=False)


def apply_complement_projector(Q, M):
    """Return ``(I - Q Q^H) M`` for ``Q`` with orthonormal columns."""
    Q = _as_matrix(Q)
    M = np.asarray(M, dtype=complex)
    if Q.shape[0] != M.shape[0]:
        raise ArgumentError(f"row mismatch: Q has {Q.shape[0]}, M has {M.shape[0]}")
    if Q.shape[1] == 0:
        return M.copy()
    return M - Q @ (Q.conj().T @ M)


def hermitian_definite_gevp_min(Ah, Bh, rank_tol=1e-12, herm_tol=1e-10):
    """Smallest eigenpair of ``Ah v = lambda Bh v`` with ``Bh`` semidefinite.

    Directions in the null space of ``Bh`` are eliminated by a Schur
    complement, leaving a definite problem on ``range(Bh)``. The returned
    vector satisfies ``v^H Bh v = 1``.
    """
    Ah = _as_matrix(Ah)
    Bh = _as_matrix(Bh)
    k = Ah.shape[0]
    if Ah.shape != (k, k) or Bh.shape != (k, k):
        raise ArgumentError(f"shape mismatch: {Ah.shape} vs {Bh.shape}")
    na = np.linalg.norm(Ah)
    nb = np.linalg.norm(Bh)
    if np.linalg.norm(Ah - Ah.conj().T) > herm_tol * max(na, 1.0):
        raise ArgumentError("Ah is not Hermitian")
    if np.linalg.norm(Bh - Bh.conj().T) > herm_tol * max(nb, 1.0):
        raise ArgumentError("Bh is not Hermitian")
    Ah = (Ah + Ah.conj().T) / 2
    Bh = (Bh + Bh.conj().T) / 2

    s, U = np.linalg.eigh(Bh)
    scale = np.abs(s).max() if k else 0.0
    if scale == 0:
        raise DegeneratePencilError("Bh is zero; no finite eigenvalue")
    if s.min() < -1e-10 * scale:
        raise ArgumentError(f"Bh is indefinite (eigenvalue {s.min():.3e})")
    in_range = s > rank_tol * scale
    UR, UZ = U[:, in_range], U[:, ~in_range]
    sR = s[in_range]

    At = U.conj().T @ Ah @ U
    ARR = At[np.ix_(in_range, in_range)]
    if UZ.shape[1]:
        AZZ = At[np.ix_(~in_range, ~in_range)]
        AZR = At[np.ix_(~in_range, in_range)]
        mu = np.linalg.eigvalsh(AZZ)
        if mu.min() < -1e-10 * max(na, 1.0):
            raise DegeneratePencilError("objective unbounded below on null(Bh)")
        X = np.linalg.pinv(AZZ, rcond=1e-12, hermitian=True) @ AZR
        if np.linalg.norm(AZZ @ X - AZR) > 1e-8 * max(np.linalg.norm(AZR), 1e-300) + 1e-14 * na:
            raise DegeneratePencilError("coupling to null(Bh) is not resolvable")
        S = ARR - AZR.conj().T @ X
    else:
        X = np.zeros((0, sR.size), dtype=complex)
        S = ARR
    D = 1.0 / np.sqrt(sR)
    K = D[:, None] * S * D[None, :]
    K = (K + K.conj().T) / 2
    lam, Y = np.linalg.eigh(K)
    y = Y[:, 0]
    vR = D * y
    vZ = -X @ vR
    v = UR @ vR + UZ @ vZ
    return float(lam[0]), v
