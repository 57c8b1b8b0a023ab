import numpy as np
import pytest

from app.core.exceptions import InvalidArgumentError
from app.core.linalg import TruncatedSvdSolver, as_complex_matrix, svd, tsvd_solve


def _random_complex(rng, m, n):
    return rng.standard_normal((m, n)) + 1j * rng.standard_normal((m, n))


class TestSvd:

    @pytest.mark.parametrize("shape", [(1, 1), (6, 6), (12, 12), (10, 6), (6, 10), (33, 33)])
    def test_reconstruction_and_orthonormality(self, rng, shape):
        a = _random_complex(rng, *shape)
        fact = svd(a)
        k = min(shape)
        assert fact.sigma.shape == (k,)
        assert np.all(np.diff(fact.sigma) <= 0.0)
        recon = fact.u @ np.diag(fact.sigma) @ fact.v.conj().T
        np.testing.assert_allclose(recon, a, atol=1e-12 * np.max(fact.sigma))
        np.testing.assert_allclose(fact.u.conj().T @ fact.u, np.eye(k), atol=1e-12)
        np.testing.assert_allclose(fact.v.conj().T @ fact.v, np.eye(k), atol=1e-12)

    def test_singular_values_match_numpy(self, rng):
        a = _random_complex(rng, 16, 16)
        np.testing.assert_allclose(svd(a).sigma, np.linalg.svd(a, compute_uv=False), rtol=1e-12)

    def test_real_input_promoted(self):
        fact = svd(np.array([[3.0, 0.0], [0.0, -4.0]]))
        np.testing.assert_allclose(fact.sigma, [4.0, 3.0], atol=1e-15)

    def test_zero_matrix(self):
        fact = svd(np.zeros((4, 3)))
        np.testing.assert_array_equal(fact.sigma, np.zeros(3))
        np.testing.assert_allclose(fact.u.conj().T @ fact.u, np.eye(3), atol=1e-14)

    @pytest.mark.parametrize("bad", [np.zeros((0, 3)), np.ones(4), np.array([[1.0, np.nan]])])
    def test_invalid_matrix(self, bad):
        with pytest.raises(InvalidArgumentError):
            as_complex_matrix(bad)


class TestTruncatedSolve:

    def test_consistent_square_system(self, rng):
        a = _random_complex(rng, 10, 10)
        x = rng.standard_normal(10) + 1j * rng.standard_normal(10)
        report = tsvd_solve(a, a @ x)
        assert report.rank_used == 10
        assert not report.degenerate
        np.testing.assert_allclose(report.solution, x, atol=1e-10)
        assert report.residual_inf < 1e-12

    def test_rank_deficient_matches_pseudoinverse(self, rng):
        left = _random_complex(rng, 8, 3)
        right = _random_complex(rng, 3, 8)
        a = left @ right
        b = rng.standard_normal(8) + 1j * rng.standard_normal(8)
        report = tsvd_solve(a, b, rel_tol=1e-10)
        assert report.rank_used == 3
        expected = np.linalg.pinv(a, rcond=1e-10) @ b
        np.testing.assert_allclose(report.solution, expected, atol=1e-9)

    def test_zero_matrix_gives_zero_solution(self):
        report = tsvd_solve(np.zeros((3, 3)), np.ones(3))
        assert report.degenerate
        assert report.rank_used == 0
        np.testing.assert_array_equal(report.solution, np.zeros(3))
        assert report.residual_inf == pytest.approx(1.0)

    def test_solver_reused_across_right_hand_sides(self, rng):
        a = _random_complex(rng, 7, 7)
        solver = TruncatedSvdSolver(a)
        reports = [solver.solve(rng.standard_normal(7)) for _ in range(3)]
        assert len({r.rank_used for r in reports}) == 1
        assert all(r.sigma_max == solver.sigma_max for r in reports)

    def test_least_squares_tall(self, rng):
        a = _random_complex(rng, 12, 5)
        b = rng.standard_normal(12) + 1j * rng.standard_normal(12)
        report = tsvd_solve(a, b)
        expected, *_ = np.linalg.lstsq(a, b, rcond=None)
        np.testing.assert_allclose(report.solution, expected, atol=1e-11)

    @pytest.mark.parametrize("rel_tol", [0.0, 1.0, -1e-3, 2.0])
    def test_bad_threshold(self, rel_tol):
        with pytest.raises(InvalidArgumentError):
            TruncatedSvdSolver(np.eye(3), rel_tol=rel_tol)

    def test_rhs_length_mismatch(self):
        with pytest.raises(InvalidArgumentError):
            tsvd_solve(np.eye(3), np.ones(4))

    def test_non_finite_rhs(self):
        with pytest.raises(InvalidArgumentError):
            TruncatedSvdSolver(np.eye(2)).solve([1.0, np.inf])
