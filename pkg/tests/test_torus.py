"""
Unit tests for angle handling, rays, bisection and triangles on the torus.
"""
import math
import sys
from pathlib import Path
import numpy as np
import pytest

# Add project root to Python path for tests
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from src.geometry.constants import O_CENTER, PI, T1_VERTICES, T2_VERTICES, TAU
from src.geometry.torus import (
    angle_difference,
    bisect_root,
    bisect_roots,
    distance_to_triangle,
    flat_distance,
    normalize_angle,
    normalize_angles,
    point_in_closed_triangle,
    ray_hit_horizontal,
    torus_distance_to_triangles,
    torus_in_triangles,
)
from src.pydantic_models.geometry import PlanePoint
from src.utils.exceptions import BracketError, DegenerateGeometryError, DomainError

UNIT_TRIANGLE = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])


class TestAngles:
    """Test suite for angle normalization and wrapped differences."""

    def test_normalize_angle_range(self):
        """Representatives land in [0, 2pi)."""
        assert normalize_angle(TAU) == 0.0
        assert normalize_angle(3.0 * PI) == pytest.approx(PI)
        assert normalize_angle(-PI / 2.0) == pytest.approx(1.5 * PI)

    def test_normalize_tiny_negative(self):
        """A tiny negative angle never rounds up to 2pi."""
        value = normalize_angle(-1e-18)
        assert 0.0 <= value < TAU

    def test_normalize_rejects_non_finite(self):
        """NaN and infinities are domain errors."""
        with pytest.raises(DomainError):
            normalize_angle(float("nan"))
        with pytest.raises(DomainError):
            normalize_angles(np.array([0.0, np.inf]))

    def test_angle_difference_wraps(self):
        """Differences take the short way around the circle."""
        assert angle_difference(0.1, TAU - 0.1) == pytest.approx(0.2)
        assert angle_difference(TAU - 0.1, 0.1) == pytest.approx(-0.2)

    def test_flat_distance(self):
        """Plain Euclidean distance inside the fundamental domain."""
        assert flat_distance(PlanePoint(u=0.0, v=0.0), PlanePoint(u=3.0, v=4.0)) == pytest.approx(5.0)


class TestRays:
    """Test suite for rays meeting the line psi = pi."""

    def test_ray_hits_level(self):
        """The ray from O through (2pi/3, 7pi/6) meets psi = pi at (2pi/3, pi)."""
        center = PlanePoint(u=O_CENTER[0], v=O_CENTER[1])
        hit = ray_hit_horizontal(center, PlanePoint(u=2.0 * PI / 3.0, v=7.0 * PI / 6.0), PI)
        assert hit.u == pytest.approx(2.0 * PI / 3.0)
        assert hit.v == PI

    def test_parallel_ray(self):
        """A horizontal ray never meets another horizontal line."""
        center = PlanePoint(u=O_CENTER[0], v=O_CENTER[1])
        with pytest.raises(DegenerateGeometryError):
            ray_hit_horizontal(center, PlanePoint(u=PI, v=O_CENTER[1]), PI)

    def test_level_behind_origin(self):
        """The target line behind the ray origin is rejected."""
        center = PlanePoint(u=O_CENTER[0], v=O_CENTER[1])
        with pytest.raises(DegenerateGeometryError):
            ray_hit_horizontal(center, PlanePoint(u=2.0 * PI / 3.0, v=5.0 * PI / 3.0), PI)

    def test_ray_through_origin(self):
        center = PlanePoint(u=1.0, v=1.0)
        with pytest.raises(DegenerateGeometryError):
            ray_hit_horizontal(center, center, PI)


class TestBisection:
    """Test suite for scalar and vectorized bisection."""

    def test_simple_root(self):
        """Root of a linear function to within the tolerance."""
        assert bisect_root(lambda s: s - 0.3, 0.0, 1.0, 1e-12) == pytest.approx(0.3, abs=1e-12)

    def test_root_at_endpoint(self):
        """An exact zero at an endpoint is returned as is."""
        assert bisect_root(lambda s: s, 0.0, 1.0, 1e-12) == 0.0

    def test_reversed_interval(self):
        assert bisect_root(lambda s: s - 0.7, 1.0, 0.0, 1e-12) == pytest.approx(0.7, abs=1e-12)

    def test_no_sign_change(self):
        """Intervals without a sign change raise BracketError."""
        with pytest.raises(BracketError):
            bisect_root(lambda s: s * s + 1.0, -1.0, 1.0, 1e-12)

    def test_bad_tolerance(self):
        with pytest.raises(DomainError):
            bisect_root(lambda s: s - 0.5, 0.0, 1.0, 0.0)

    def test_vectorized_roots(self):
        """One independent bracket per entry."""
        targets = np.array([0.1, 0.25, 0.9])
        roots = bisect_roots(lambda s: s - targets, np.zeros(3), np.ones(3), 1e-12)
        np.testing.assert_allclose(roots, targets, atol=1e-12)

    def test_vectorized_no_sign_change(self):
        with pytest.raises(BracketError):
            bisect_roots(lambda s: s + 2.0, np.zeros(2), np.ones(2), 1e-12)

    def test_vectorized_empty(self):
        assert bisect_roots(lambda s: s, np.array([]), np.array([]), 1e-12).size == 0


class TestTriangles:
    """Test suite for planar and torus triangle distances."""

    def test_inside_is_zero(self):
        """Points inside or on the triangle have distance 0."""
        points = np.array([[0.2, 0.2], [0.0, 0.0], [0.5, 0.5]])
        np.testing.assert_allclose(distance_to_triangle(points, UNIT_TRIANGLE), 0.0, atol=1e-15)

    def test_closed_membership(self):
        """Edges and vertices belong to the closed triangle; tol widens it."""
        points = np.array([[0.5, 0.0], [1.0, 0.0], [0.6, 0.6], [-1e-10, 0.3]])
        np.testing.assert_array_equal(point_in_closed_triangle(points, UNIT_TRIANGLE), [True, True, False, False])
        assert point_in_closed_triangle(points, UNIT_TRIANGLE, tol=1e-9)[3]

    def test_outside_distance(self):
        """Distance to the nearest edge or vertex."""
        points = np.array([[-1.0, 0.0], [1.0, 1.0], [2.0, -1.0]])
        expected = [1.0, math.sqrt(0.5), math.sqrt(2.0)]
        np.testing.assert_allclose(distance_to_triangle(points, UNIT_TRIANGLE), expected)

    def test_identified_vertices(self):
        """(pi, 0) belongs to T1 through its translate (pi, 2pi)."""
        point = np.array([[PI, 0.0]])
        assert torus_in_triangles(point, (T1_VERTICES,), 1e-12)[0]
        assert torus_distance_to_triangles(point, (T1_VERTICES,))[0] == pytest.approx(0.0, abs=1e-12)

    def test_wrapped_distance(self):
        """Points near 2pi see T1 across the seam at 0."""
        point = np.array([[TAU - 0.1, PI]])
        distance = torus_distance_to_triangles(point, (T1_VERTICES,))[0]
        assert distance == pytest.approx(0.1, abs=1e-12)

    def test_outside_coamoeba(self):
        """(pi/2, pi/2) is away from both triangles."""
        point = np.array([[PI / 2.0, PI / 2.0]])
        assert not torus_in_triangles(point, (T1_VERTICES, T2_VERTICES), 1e-9)[0]


if __name__ == "__main__":
    pytest.main([__file__])
