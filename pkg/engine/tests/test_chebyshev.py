import numpy as np
import pytest

from app.core.chebyshev import (
    barycentric_eval,
    barycentric_weights,
    lagrange_diff_matrix,
    lobatto_grid,
    map_grid,
    radau_grid,
)
from app.core.exceptions import InvalidArgumentError


class TestLobattoGrid:

    def test_two_points(self):
        grid = lobatto_grid(2)
        np.testing.assert_array_equal(grid.nodes, [-1.0, 1.0])
        np.testing.assert_allclose(grid.diff, [[-0.5, 0.5], [-0.5, 0.5]], atol=1e-15)

    def test_three_points_differentiates_quadratic(self):
        grid = lobatto_grid(3)
        np.testing.assert_allclose(grid.nodes, [-1.0, 0.0, 1.0], atol=1e-16)
        np.testing.assert_allclose(grid.diff @ grid.nodes ** 2, [-2.0, 0.0, 2.0], atol=1e-13)

    def test_five_points_corner_entry(self):
        grid = lobatto_grid(5)
        h = np.sqrt(2.0) / 2.0
        np.testing.assert_allclose(grid.nodes, [-1.0, -h, 0.0, h, 1.0], atol=1e-15)
        assert grid.diff[0, 0] == pytest.approx(-5.5, abs=1e-12)

    @pytest.mark.parametrize("n", [2, 3, 4, 7, 16, 33, 64])
    def test_nodes_and_row_sums(self, n):
        grid = lobatto_grid(n)
        j = np.arange(n)
        np.testing.assert_allclose(grid.nodes, -np.cos(j * np.pi / (n - 1)), atol=1e-15)
        assert grid.nodes[0] == -1.0 and grid.nodes[-1] == 1.0
        assert np.all(np.diff(grid.nodes) > 0)
        assert np.max(np.abs(grid.diff.sum(axis=1))) < 1e-12

    @pytest.mark.parametrize("n", [4, 8, 12, 20])
    def test_monomials_differentiated(self, n):
        grid = lobatto_grid(n)
        x = grid.nodes
        for k in range(1, n):
            err = np.max(np.abs(grid.diff @ x ** k - k * x ** (k - 1)))
            assert err < 1e-10 * n * n, f"k={k}, n={n}, err={err:.3e}"

    def test_arrays_read_only(self):
        grid = lobatto_grid(6)
        with pytest.raises(ValueError):
            grid.nodes[0] = 0.0

    @pytest.mark.parametrize("n", [1, 0, -3])
    def test_too_few_points(self, n):
        with pytest.raises(InvalidArgumentError):
            lobatto_grid(n)


class TestRadauGrid:

    def test_two_points(self):
        np.testing.assert_allclose(radau_grid(2), [1.0, 0.25], atol=1e-15)

    @pytest.mark.parametrize("n", [4, 16, 64])
    def test_decreasing_in_unit_interval(self, n):
        t = radau_grid(n)
        assert t[0] == 1.0
        assert np.all(t > 0.0) and np.all(t <= 1.0)
        assert np.all(np.diff(t) < 0.0)

    def test_too_few_points(self):
        with pytest.raises(InvalidArgumentError):
            radau_grid(1)


class TestMapGrid:

    @pytest.mark.parametrize("a", [1.0, 0.3, 7.5])
    def test_affine_image(self, a):
        grid = lobatto_grid(9)
        mapped = map_grid(grid, a)
        assert mapped.mapped[0] == 0.0
        assert mapped.mapped[-1] == a
        np.testing.assert_allclose(mapped.mapped, 0.5 * a * grid.nodes + 0.5 * a, atol=1e-15 * a)
        np.testing.assert_allclose(mapped.scaled_diff, (2.0 / a) * grid.diff)

    @pytest.mark.parametrize("a", [0.0, -1.0, float("nan"), float("inf")])
    def test_bad_length(self, a):
        with pytest.raises(InvalidArgumentError):
            map_grid(lobatto_grid(4), a)


class TestBarycentric:

    @pytest.mark.parametrize("n", [5, 12, 24])
    def test_lagrange_matrix_matches_lobatto(self, n):
        grid = lobatto_grid(n)
        np.testing.assert_allclose(lagrange_diff_matrix(grid.nodes), grid.diff, atol=1e-10 * n * n)

    def test_interpolation_exact_for_polynomials(self, rng):
        nodes = radau_grid(10)
        coeffs = rng.standard_normal(10) + 1j * rng.standard_normal(10)
        values = np.polynomial.polynomial.polyval(nodes, coeffs)
        x = np.array([0.0, 0.05, 0.5, 0.93])
        expected = np.polynomial.polynomial.polyval(x, coeffs)
        np.testing.assert_allclose(barycentric_eval(nodes, values, x), expected, atol=1e-11)

    def test_node_hit_returns_value(self):
        nodes = np.array([0.0, 0.4, 1.0])
        values = np.array([1.0, 2.0, 5.0])
        assert barycentric_eval(nodes, values, 0.4) == 2.0
        assert np.ndim(barycentric_eval(nodes, values, 0.7)) == 0

    def test_duplicate_nodes(self):
        with pytest.raises(InvalidArgumentError):
            barycentric_weights(np.array([0.0, 0.5, 0.5]))
