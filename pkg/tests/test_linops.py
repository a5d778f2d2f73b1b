"""Grid, operators, spectral data, and resolvent solves."""

import math

import numpy as np
import pytest

from illposed import (
    DegenerateOperatorError,
    DiscreteOperator,
    Grid,
    InvalidKernelError,
    build_fredholm_operator,
    build_integration_operator,
    dirichlet_green_kernel,
    resolvent_solve,
    scale_to_unit,
    spectral,
)


class TestGrid:
    def test_midpoint_nodes(self):
        grid = Grid(4)
        assert grid.h == 0.25
        np.testing.assert_allclose(grid.nodes, [0.125, 0.375, 0.625, 0.875])

    def test_inner_and_norm_match_weighted_sums(self, rng):
        grid = Grid(7)
        u = rng.standard_normal(7)
        v = rng.standard_normal(7)
        assert grid.inner(u, v) == pytest.approx(np.sum(u * v) / 7.0, rel=1e-14)
        assert grid.norm(u) == pytest.approx(math.sqrt(np.sum(u * u) / 7.0), rel=1e-14)

    def test_constant_function_has_unit_norm(self):
        grid = Grid(13)
        assert grid.norm(np.ones(13)) == pytest.approx(1.0, rel=1e-14)

    @pytest.mark.parametrize("n", [0, -3])
    def test_invalid_size_rejected(self, n):
        with pytest.raises(ValueError):
            Grid(n)


class TestIntegrationOperator:
    def test_matrix_entries_n2(self):
        op = build_integration_operator(2)
        np.testing.assert_allclose(op.matrix, [[0.5, 0.0], [0.5, 0.5]])

    def test_integrates_constant_to_node_coordinates(self):
        # cumulative midpoint sums of 1 land on the cell right endpoints,
        # i.e. (A 1)(x_i) = i h = x_i + h/2
        op = build_integration_operator(16)
        expected = np.arange(1, 17) / 16.0
        np.testing.assert_allclose(op.apply(np.ones(16)), expected, rtol=1e-14)

    def test_singular_values_n2_closed_form(self):
        data = spectral(build_integration_operator(2))
        golden = (1.0 + math.sqrt(5.0)) / 4.0
        np.testing.assert_allclose(
            data.s, [golden, (math.sqrt(5.0) - 1.0) / 4.0], rtol=1e-14
        )
        assert data.norm == pytest.approx(golden, rel=1e-14)


class TestFredholmOperator:
    def test_kernel_values(self):
        assert dirichlet_green_kernel(0.25, 0.75) == pytest.approx(0.0625)
        assert dirichlet_green_kernel(0.5, 0.5) == pytest.approx(0.25)
        assert dirichlet_green_kernel(0.0, 0.7) == pytest.approx(0.0)

    def test_matrix_is_symmetric(self, fredholm16_op):
        np.testing.assert_allclose(
            fredholm16_op.matrix, fredholm16_op.matrix.T, atol=1e-15
        )

    def test_leading_eigenvalues_match_continuum(self):
        # continuum spectrum of the kernel min(x,y) - xy is 1/(k pi)^2;
        # the midpoint discretization converges at O(h^2)
        data = spectral(build_fredholm_operator(None, 200))
        for k in (1, 2, 3):
            assert data.s[k - 1] == pytest.approx(1.0 / (k * math.pi) ** 2, rel=2e-4)

    def test_custom_kernel_fills_matrix(self):
        op = build_fredholm_operator(lambda x, y: x + y, 3)
        x = Grid(3).nodes
        expected = (x[:, None] + x[None, :]) / 3.0
        np.testing.assert_allclose(op.matrix, expected, rtol=1e-14)

    def test_scalar_only_kernel_falls_back_to_pointwise(self):
        def kernel(x, y):
            if not np.isscalar(x) and not isinstance(x, float):
                raise TypeError("scalars only")
            return min(x, y)

        op = build_fredholm_operator(kernel, 4)
        x = Grid(4).nodes
        expected = np.minimum(x[:, None], x[None, :]) / 4.0
        np.testing.assert_allclose(op.matrix, expected, rtol=1e-14)

    def test_nonfinite_kernel_rejected(self):
        with np.errstate(invalid="ignore"), pytest.raises(InvalidKernelError):
            build_fredholm_operator(lambda x, y: (x - y) / (x - y), 8)

    @pytest.mark.parametrize("n", [0, -1])
    def test_invalid_size_rejected(self, n):
        with pytest.raises(ValueError):
            build_fredholm_operator(None, n)


class TestDiscreteOperator:
    def test_adjoint_identity(self, fredholm16_op, rng):
        op = fredholm16_op
        u = rng.standard_normal(op.n)
        v = rng.standard_normal(op.n)
        lhs = op.inner_h(op.apply(u), v)
        rhs = op.inner_h(u, op.apply_adjoint(v))
        assert lhs == pytest.approx(rhs, abs=1e-13)

    def test_gram_is_a_star_a(self, integration32_op, rng):
        op = integration32_op
        u = rng.standard_normal(op.n)
        np.testing.assert_allclose(
            op.gram() @ u, op.apply_adjoint(op.apply(u)), rtol=1e-12, atol=1e-15
        )

    def test_matrix_is_read_only(self, fredholm16_op):
        with pytest.raises(ValueError):
            fredholm16_op.matrix[0, 0] = 99.0

    def test_rectangular_matrix_rejected(self):
        with pytest.raises(ValueError):
            DiscreteOperator(Grid(3), np.ones((3, 2)))


class TestSpectral:
    def test_vectors_are_h_orthonormal(self, fredholm16_op):
        op = fredholm16_op
        data = spectral(op)
        gram_left = op.h * (data.left.T @ data.left)
        gram_right = op.h * (data.right.T @ data.right)
        np.testing.assert_allclose(gram_left, np.eye(op.n), atol=1e-12)
        np.testing.assert_allclose(gram_right, np.eye(op.n), atol=1e-12)

    def test_reconstructs_operator(self, fredholm16_op):
        op = fredholm16_op
        data = spectral(op)
        rebuilt = op.h * ((data.left * data.s) @ data.right.T)
        np.testing.assert_allclose(rebuilt, op.matrix, atol=1e-14)

    def test_norm_is_top_singular_value(self, fredholm16_op, rng):
        data = spectral(fredholm16_op)
        # ratio ||A u|| / ||u|| never exceeds s_1
        for _ in range(5):
            u = rng.standard_normal(16)
            ratio = fredholm16_op.norm_h(fredholm16_op.apply(u)) / fredholm16_op.norm_h(u)
            assert ratio <= data.norm * (1 + 1e-12)

    def test_eigenvalues_are_squared_singular_values(self, fredholm16_op):
        data = spectral(fredholm16_op)
        np.testing.assert_allclose(data.eigenvalues, data.s**2, rtol=1e-14)

    def test_left_coefficients_expand_vectors(self, fredholm16_op, rng):
        op = fredholm16_op
        data = spectral(op)
        f = rng.standard_normal(op.n)
        coeff = data.left_coefficients(f)
        np.testing.assert_allclose(data.left @ coeff, f, rtol=1e-10, atol=1e-12)

    def test_cached_between_calls(self, fredholm16_op):
        assert spectral(fredholm16_op) is spectral(fredholm16_op)


class TestScaleToUnit:
    def test_scaled_norm_is_one(self, fredholm16_op):
        scaled, s1 = scale_to_unit(fredholm16_op)
        assert spectral(scaled).norm == pytest.approx(1.0, rel=1e-12)
        assert s1 == pytest.approx(spectral(fredholm16_op).norm, rel=1e-14)

    def test_matrix_divided_by_norm(self, integration32_op):
        scaled, s1 = scale_to_unit(integration32_op)
        np.testing.assert_allclose(scaled.matrix, integration32_op.matrix / s1, rtol=1e-14)

    def test_zero_operator_rejected(self):
        op = DiscreteOperator(Grid(4), np.zeros((4, 4)))
        with pytest.raises(DegenerateOperatorError):
            scale_to_unit(op)


class TestResolventSolve:
    @pytest.mark.parametrize("alpha", [1e-8, 1e-4, 1.0])
    def test_solves_shifted_normal_equations(self, fredholm16_op, rng, alpha):
        op = fredholm16_op
        rhs = rng.standard_normal(op.n)
        u = resolvent_solve(op, alpha, rhs)
        residual = op.gram() @ u + alpha * u - rhs
        assert np.linalg.norm(residual) <= 1e-10 * np.linalg.norm(rhs)

    def test_norm_bounded_by_one_over_alpha(self, fredholm16_op, rng):
        op = fredholm16_op
        rhs = rng.standard_normal(op.n)
        for alpha in (1e-3, 1e-1, 10.0):
            u = resolvent_solve(op, alpha, rhs)
            assert op.norm_h(u) <= op.norm_h(rhs) / alpha * (1 + 1e-12)

    @pytest.mark.parametrize("alpha", [0.0, -1.0])
    def test_nonpositive_shift_rejected(self, fredholm16_op, alpha):
        with pytest.raises(ValueError):
            resolvent_solve(fredholm16_op, alpha, np.ones(16))
