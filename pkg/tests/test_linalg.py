import numpy as np
import pytest
from hypothesis import given, strategies as st

from baryminimax.errors import ArgumentError, DegeneratePencilError, SingularMatrixError
from baryminimax.linalg import (
    apply_complement_projector,
    condition_estimate,
    hermitian_definite_gevp_min,
    smallest_singular_pair,
    solve_upper_triangular,
    thin_qr,
)

from conftest import crandn


class TestThinQR:
    def test_identity(self):
        Q, R = thin_qr(np.eye(3))
        np.testing.assert_allclose(Q, np.eye(3), atol=1e-15)
        np.testing.assert_allclose(R, np.eye(3), atol=1e-15)

    def test_single_column(self):
        Q, R = thin_qr(np.array([[0.0], [3.0], [4.0]]))
        assert R.shape == (1, 1)
        assert R[0, 0] == pytest.approx(5.0)
        np.testing.assert_allclose(Q[:, 0], [0, 0.6, 0.8], atol=1e-15)

    def test_random_complex(self, rng):
        M = crandn(rng, 20, 6)
        Q, R = thin_qr(M)
        assert np.linalg.norm(Q.conj().T @ Q - np.eye(6)) <= 1e-13
        assert np.linalg.norm(Q @ R - M) / np.linalg.norm(M) <= 1e-13
        assert np.allclose(np.tril(R, -1), 0)
        d = np.diag(R)
        assert np.all(d.imag == 0) and np.all(d.real >= 0)

    def test_tall_large(self, rng):
        M = crandn(rng, 20000, 100)
        Q, R = thin_qr(M)
        assert np.linalg.norm(Q.conj().T @ Q - np.eye(100)) <= 1e-12
        assert np.linalg.norm(Q @ R - M) / np.linalg.norm(M) <= 1e-13

    def test_wide_rejected(self):
        with pytest.raises(ArgumentError):
            thin_qr(np.ones((2, 3)))

    def test_no_columns(self):
        Q, R = thin_qr(np.ones((4, 0)))
        assert Q.shape == (4, 0) and R.shape == (0, 0)

    @given(st.integers(1, 12), st.integers(0, 12), st.integers(0, 2**32 - 1))
    def test_property_reconstruction(self, k, extra, seed):
        M = crandn(np.random.default_rng(seed), k + extra, k)
        Q, R = thin_qr(M)
        assert np.linalg.norm(Q.conj().T @ Q - np.eye(k)) <= 1e-13
        assert np.linalg.norm(Q @ R - M) <= 1e-13 * np.linalg.norm(M)


class TestSmallestSingularPair:
    def test_diagonal(self):
        M = np.vstack([np.diag([3.0, 1.0, 2.0]), np.zeros((1, 3))])
        sp = smallest_singular_pair(M)
        assert sp.sigma_min == pytest.approx(1.0)
        np.testing.assert_allclose(np.abs(sp.v), [0, 1, 0], atol=1e-15)
        assert sp.gap == pytest.approx(1.0)
        assert sp.sigma_max == pytest.approx(3.0)

    def test_zero_column(self, rng):
        M = crandn(rng, 6, 4)
        M[:, 2] = 0
        sp = smallest_singular_pair(M)
        assert sp.sigma_min <= 1e-15
        np.testing.assert_allclose(np.abs(sp.v), [0, 0, 1, 0], atol=1e-14)

    def test_phase_convention(self, rng):
        sp = smallest_singular_pair(crandn(rng, 9, 5))
        j = np.argmax(np.abs(sp.v))
        assert sp.v[j].imag == 0 and sp.v[j].real > 0

    def test_against_gram_eigenvalues(self, rng):
        M = crandn(rng, 30, 8)
        sp = smallest_singular_pair(M)
        lam, _ = hermitian_definite_gevp_min(M.conj().T @ M, np.eye(8))
        assert sp.sigma_min**2 == pytest.approx(lam, rel=1e-12)

    def test_randomized_probe(self, rng):
        M = crandn(rng, 25, 6)
        sp = smallest_singular_pair(M)
        assert np.linalg.norm(M @ sp.v) == pytest.approx(sp.sigma_min, rel=1e-10)
        assert np.linalg.norm(sp.v) == pytest.approx(1.0)
        W = crandn(rng, 6, 5000)
        W /= np.linalg.norm(W, axis=0)
        assert np.linalg.norm(M @ W, axis=0).min() >= sp.sigma_min * (1 - 1e-8)

    def test_single_column_gap_infinite(self):
        sp = smallest_singular_pair(np.array([[3.0], [4.0]]))
        assert sp.sigma_min == pytest.approx(5.0)
        assert sp.gap == np.inf

    def test_wide_rejected(self):
        with pytest.raises(ArgumentError):
            smallest_singular_pair(np.ones((2, 3)))


class TestTriangularSolve:
    def test_identity(self, rng):
        v = crandn(rng, 5)
        np.testing.assert_array_equal(solve_upper_triangular(np.eye(5), v), v)

    def test_two_by_two(self):
        x = solve_upper_triangular(np.array([[2.0, 1.0], [0.0, 4.0]]), np.array([4.0, 8.0]))
        np.testing.assert_allclose(x, [1.0, 2.0], rtol=1e-15)

    def test_random_residual(self, rng):
        R = np.triu(crandn(rng, 10, 10)) + 5 * np.eye(10)
        b = crandn(rng, 10)
        x = solve_upper_triangular(R, b)
        assert np.linalg.norm(R @ x - b) <= 1e-12 * np.linalg.norm(b)

    def test_singular_reports_index(self):
        R = np.diag([1.0, 1e-20, 1.0])
        with pytest.raises(SingularMatrixError) as info:
            solve_upper_triangular(R, np.ones(3))
        assert info.value.index == 1
        assert info.value.magnitude == pytest.approx(1e-20)

    def test_configurable_floor(self):
        R = np.diag([1.0, 1e-3])
        with pytest.raises(SingularMatrixError):
            solve_upper_triangular(R, np.ones(2), floor=1e-2)
        np.testing.assert_allclose(solve_upper_triangular(R, np.ones(2), floor=1e-4), [1, 1e3])

    def test_condition_estimate(self):
        assert condition_estimate(np.diag([2.0, 0.5])) == pytest.approx(4.0)
        assert condition_estimate(np.zeros((0, 0))) == 1.0


class TestComplementProjector:
    def test_empty_q(self, rng):
        M = crandn(rng, 5, 3)
        np.testing.assert_array_equal(apply_complement_projector(np.zeros((5, 0)), M), M)

    def test_annihilates_range(self, rng):
        Q, _ = thin_qr(crandn(rng, 8, 3))
        assert np.linalg.norm(apply_complement_projector(Q, Q)) <= 1e-13 * np.linalg.norm(Q)

    def test_orthogonal_and_idempotent(self, rng):
        Q, _ = thin_qr(crandn(rng, 40, 7))
        M = crandn(rng, 40, 5)
        P = apply_complement_projector(Q, M)
        assert np.linalg.norm(Q.conj().T @ P) <= 1e-12 * np.linalg.norm(M)
        P2 = apply_complement_projector(Q, P)
        assert np.linalg.norm(P2 - P) <= 1e-12 * np.linalg.norm(P)

    def test_row_mismatch(self):
        with pytest.raises(ArgumentError):
            apply_complement_projector(np.eye(3), np.ones((4, 1)))


class TestGEVPOracle:
    def test_diagonal(self):
        lam, v = hermitian_definite_gevp_min(np.diag([5.0, 2.0, 7.0]), np.eye(3))
        assert lam == pytest.approx(2.0)
        np.testing.assert_allclose(np.abs(v), [0, 1, 0], atol=1e-14)

    def test_identical_pencil(self, rng):
        G = crandn(rng, 6, 4)
        B = G.conj().T @ G
        lam, v = hermitian_definite_gevp_min(B, B)
        assert lam == pytest.approx(1.0, rel=1e-12)
        assert (v.conj() @ B @ v).real == pytest.approx(1.0)

    def test_random_residual_and_rayleigh(self, rng):
        G, H = crandn(rng, 9, 5), crandn(rng, 7, 5)
        A, B = G.conj().T @ G, H.conj().T @ H
        lam, v = hermitian_definite_gevp_min(A, B)
        res = np.linalg.norm(A @ v - lam * B @ v)
        assert res <= 1e-10 * (np.linalg.norm(A, 2) + abs(lam) * np.linalg.norm(B, 2))
        Z = crandn(rng, 5, 20000)
        rq = np.einsum("ij,ij->j", Z.conj(), A @ Z).real / np.einsum("ij,ij->j", Z.conj(), B @ Z).real
        assert rq.min() >= lam * (1 - 1e-10)
        assert rq.min() <= lam * 1.5

    def test_semidefinite_b_deflation(self, rng):
        # B vanishes on the last coordinate; minimizing over it is a Schur complement.
        G = crandn(rng, 8, 4)
        A = G.conj().T @ G
        B = np.diag([1.0, 2.0, 3.0, 0.0]).astype(complex)
        lam, v = hermitian_definite_gevp_min(A, B)
        S = A[:3, :3] - np.outer(A[:3, 3], A[3, :3]) / A[3, 3]
        D = np.diag(1 / np.sqrt([1.0, 2.0, 3.0]))
        assert lam == pytest.approx(np.linalg.eigvalsh(D @ S @ D).min(), rel=1e-10)
        assert np.linalg.norm(A @ v - lam * B @ v) <= 1e-10 * np.linalg.norm(A)

    def test_indefinite_b(self):
        with pytest.raises(ArgumentError):
            hermitian_definite_gevp_min(np.eye(2), np.diag([1.0, -1.0]))

    def test_zero_b(self):
        with pytest.raises(DegeneratePencilError):
            hermitian_definite_gevp_min(np.eye(2), np.zeros((2, 2)))

    def test_non_hermitian(self):
        with pytest.raises(ArgumentError):
            hermitian_definite_gevp_min(np.array([[1.0, 2.0], [0.0, 1.0]]), np.eye(2))
