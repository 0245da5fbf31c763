import math

import numpy as np
import pytest

from oblique import (
    ConfigurationError,
    ContractViolationError,
    Hyperplane,
    Side,
    canonical_plane,
    fit_hyperplane,
    householder_reflection,
    side_of,
    symmetric_eigen,
)

INV_SQRT2 = 1.0 / math.sqrt(2.0)


class TestHyperplane:
    def test_unit_norm_required(self):
        with pytest.raises(ContractViolationError):
            Hyperplane([1.0, 1.0], 0.0)

    def test_canonical_orientation_required(self):
        with pytest.raises(ContractViolationError):
            Hyperplane([-1.0, 0.0], 0.0)

    def test_zero_vector_rejected(self):
        with pytest.raises(ContractViolationError):
            Hyperplane([0.0, 0.0], 0.0)

    def test_active_features_are_nonzero_indices(self):
        plane = Hyperplane([0.0, 1.0, 0.0], 2.5)
        assert plane.active_features == (1,)
        assert plane.bias == 2.5

    def test_coefficients_are_immutable(self):
        plane = Hyperplane([1.0, 0.0], 0.0)
        with pytest.raises(ValueError):
            plane.coefficients[0] = 2.0

    def test_canonical_plane_flips_sign_and_bias(self):
        plane = canonical_plane(np.array([-INV_SQRT2, INV_SQRT2]), -3.0)
        assert plane.coefficients[0] == pytest.approx(INV_SQRT2)
        assert plane.coefficients[1] == pytest.approx(-INV_SQRT2)
        assert plane.bias == 3.0

    def test_canonical_plane_is_idempotent(self):
        plane = canonical_plane(np.array([INV_SQRT2, -INV_SQRT2]), 1.0)
        again = canonical_plane(plane.coefficients.copy(), plane.bias)
        assert np.array_equal(again.coefficients, plane.coefficients)
        assert again.bias == plane.bias


class TestSymmetricEigen:
    def test_identity(self):
        values, vectors = symmetric_eigen(np.eye(2))
        assert np.allclose(values, [1.0, 1.0])
        assert np.array_equal(vectors, np.eye(2))

    def test_already_diagonal(self):
        values, vectors = symmetric_eigen(np.array([[2.0, 0.0], [0.0, 5.0]]))
        assert np.allclose(values, [2.0, 5.0])
        assert np.array_equal(vectors, np.eye(2))

    def test_ones_matrix(self):
        values, vectors = symmetric_eigen(np.array([[1.0, 1.0], [1.0, 1.0]]))
        assert values == pytest.approx([0.0, 2.0], abs=1e-12)
        assert vectors[:, 0] == pytest.approx([INV_SQRT2, -INV_SQRT2], abs=1e-12)
        assert vectors[:, 1] == pytest.approx([INV_SQRT2, INV_SQRT2], abs=1e-12)

    def test_descending_diagonal_is_sorted_ascending(self):
        values, vectors = symmetric_eigen(np.diag([5.0, 2.0, 1.0]))
        assert np.allclose(values, [1.0, 2.0, 5.0])
        # columns follow the sort: e3, e2, e1
        assert np.array_equal(vectors, np.eye(3)[:, [2, 1, 0]])

    def test_one_by_one(self):
        values, vectors = symmetric_eigen(np.array([[4.0]]))
        assert values[0] == 4.0
        assert vectors[0, 0] == 1.0

    def test_asymmetric_rejected(self):
        with pytest.raises(ContractViolationError):
            symmetric_eigen(np.array([[1.0, 2.0], [0.0, 1.0]]))

    def test_non_square_rejected(self):
        with pytest.raises(ConfigurationError):
            symmetric_eigen(np.ones((2, 3)))

    def test_reconstruction_and_orthonormality(self):
        rng = np.random.default_rng(3)
        for _ in range(300):
            r = int(rng.integers(1, 9))
            half = rng.uniform(-10.0, 10.0, size=(r, r))
            a = (half + half.T) / 2.0
            values, vectors = symmetric_eigen(a)
            assert np.all(np.diff(values) >= -1e-12)
            rebuilt = vectors @ np.diag(values) @ vectors.T
            assert np.abs(rebuilt - a).max() <= 1e-8
            gram = vectors.T @ vectors
            assert np.abs(gram - np.eye(r)).max() <= 1e-8
            for k in range(r):
                col = vectors[:, k]
                nonzero = col[col != 0.0]
                if nonzero.size:
                    assert nonzero[0] > 0.0


class TestFitHyperplane:
    def test_single_point_axis_plane(self):
        plane = fit_hyperplane(np.array([[3.0]]), [0], 2)
        assert np.array_equal(plane.coefficients, [1.0, 0.0])
        assert plane.bias == 3.0

    def test_antidiagonal_pair(self):
        plane = fit_hyperplane(np.array([[0.0, 1.0], [1.0, 0.0]]), [0, 1], 2)
        assert plane.coefficients == pytest.approx([INV_SQRT2, INV_SQRT2], abs=1e-12)
        assert plane.bias == pytest.approx(INV_SQRT2, abs=1e-12)

    def test_coincident_points_fall_back_to_first_feature(self):
        plane = fit_hyperplane(np.zeros((2, 2)), [0, 1], 2)
        assert np.array_equal(plane.coefficients, [1.0, 0.0])
        assert plane.bias == 0.0

    def test_embedding_into_wider_space(self):
        plane = fit_hyperplane(np.array([[0.0, 1.0], [1.0, 0.0]]), [1, 3], 5)
        assert plane.active_features == (1, 3)
        assert plane.coefficients[0] == 0.0
        assert plane.coefficients[2] == 0.0
        assert plane.coefficients[4] == 0.0

    def test_missing_coordinate_rejected(self):
        with pytest.raises(ContractViolationError):
            fit_hyperplane(np.array([[0.0, math.nan], [1.0, 0.0]]), [0, 1], 2)

    def test_bad_shapes_rejected(self):
        with pytest.raises(ConfigurationError):
            fit_hyperplane(np.zeros((2, 3)), [0, 1], 3)
        with pytest.raises(ConfigurationError):
            fit_hyperplane(np.zeros((2, 2)), [1, 0], 2)
        with pytest.raises(ConfigurationError):
            fit_hyperplane(np.zeros((2, 2)), [0, 3], 2)

    def test_incidence_property(self):
        rng = np.random.default_rng(5)
        for _ in range(1000):
            m = int(rng.integers(1, 6))
            r = int(rng.integers(1, m + 1))
            features = sorted(rng.choice(m, size=r, replace=False).tolist())
            points = rng.uniform(-5.0, 5.0, size=(r, r))
            plane = fit_hyperplane(points.copy(), features, m)
            for i in range(r):
                acc = 0.0
                for j, f in enumerate(features):
                    acc += plane.coefficients[f] * points[i, j]
                assert abs(acc - plane.bias) <= 1e-9


class TestSideOf:
    def test_on_plane_is_left(self):
        plane = Hyperplane([1.0, 0.0], 3.0)
        assert side_of(plane, np.array([3.0, 99.0])) is Side.LEFT

    def test_below_is_right(self):
        plane = Hyperplane([1.0, 0.0], 3.0)
        assert side_of(plane, np.array([2.9, 0.0])) is Side.RIGHT

    def test_missing_active_feature_routes_right(self):
        plane = Hyperplane([1.0, 0.0], 3.0)
        assert side_of(plane, np.array([math.nan, 7.0])) is Side.RIGHT

    def test_missing_inactive_feature_is_ignored(self):
        plane = Hyperplane([1.0, 0.0], 3.0)
        assert side_of(plane, np.array([4.0, math.nan])) is Side.LEFT

    def test_scaling_invariance_before_normalization(self):
        rng = np.random.default_rng(9)
        for _ in range(200):
            w = rng.uniform(-1.0, 1.0, size=3)
            if not np.any(w):
                continue
            b = float(rng.uniform(-1.0, 1.0))
            scale = float(rng.uniform(0.1, 10.0))
            norm = math.sqrt(float((w * w).sum()))
            plane_a = canonical_plane(w / norm, b / norm)
            scaled = w * scale
            snorm = math.sqrt(float((scaled * scaled).sum()))
            plane_b = canonical_plane(scaled / snorm, b * scale / snorm)
            x = rng.uniform(-2.0, 2.0, size=3)
            assert side_of(plane_a, x) is side_of(plane_b, x)


class TestHouseholder:
    def test_axis_direction_gives_identity(self):
        h = householder_reflection(np.array([0.0, 1.0, 0.0]), 1)
        assert np.array_equal(h, np.eye(3))

    def test_coordinate_swap(self):
        h = householder_reflection(np.array([0.0, 1.0]), 0)
        assert h == pytest.approx(np.array([[0.0, 1.0], [1.0, 0.0]]), abs=1e-12)

    def test_non_unit_direction_rejected(self):
        with pytest.raises(ContractViolationError):
            householder_reflection(np.array([1.0, 1.0]), 0)

    def test_bad_axis_rejected(self):
        with pytest.raises(ConfigurationError):
            householder_reflection(np.array([1.0, 0.0]), 2)

    def test_reflection_properties(self):
        rng = np.random.default_rng(17)
        for _ in range(300):
            m = int(rng.integers(1, 9))
            d = rng.normal(size=m)
            d = d / math.sqrt(float((d * d).sum()))
            axis = int(rng.integers(0, m))
            h = householder_reflection(d, axis)
            assert np.abs(h - h.T).max() <= 1e-12
            assert np.abs(h @ h - np.eye(m)).max() <= 1e-9
            mapped = h @ d
            target = np.zeros(m)
            target[axis] = 1.0
            assert np.abs(mapped - target).max() <= 1e-9
