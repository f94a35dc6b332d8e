"""
Unit tests for the complex line H: lifts, subdivision, lambda and the curves W_c.
"""
import math
import sys
from pathlib import Path
import numpy as np
import pytest

# Add project root to Python path for tests
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from src.geometry.complex_line import (
    ambient_distance,
    amoeba_boundary_class,
    amoeba_contains,
    amoeba_lift,
    argwc_slope,
    argwc_slope_derivative,
    argwc_slope_derivative_sign,
    argwc_slope_phi,
    chart_from_complex,
    classify_major,
    classify_side,
    classify_sub,
    coamoeba_contains,
    coamoeba_lift,
    eq1_residuals,
    forced_arguments,
    gamma1_residual,
    lambda_inv,
    lambda_map,
    line_residual,
    make_point,
    region_tag,
    wc_boundary_x,
)
from src.geometry.constants import LN2, O_CENTER, O_PRIME, PI, TAU
from src.pydantic_models.geometry import BoundaryKind, Major, Side, Sub
from src.utils.exceptions import DomainError

WORKED_POINT = make_point(-LN2, math.log(math.sqrt(3.0) / 2.0), 2.0 * PI / 3.0, 7.0 * PI / 6.0)


def gamma1_point(x: float, upper: bool = False):
    return amoeba_lift(x, 2.0 * x + LN2, upper=upper)


class TestResiduals:
    """Test suite for membership residuals of H."""

    def test_modulus_identities_off_line(self):
        """Both identities evaluate to 3 at the origin with zero arguments."""
        first, second = eq1_residuals(make_point(0.0, 0.0, 0.0, 0.0))
        assert first == pytest.approx(3.0)
        assert second == pytest.approx(3.0)

    def test_barycentre_is_on_line(self):
        """(0, 0, 2pi/3, 4pi/3) is the point over the cube roots of unity."""
        point = make_point(0.0, 0.0, *O_CENTER)
        assert line_residual(point) < 1e-15
        assert max(eq1_residuals(point)) < 1e-14

    def test_worked_point_on_line(self):
        assert line_residual(WORKED_POINT) < 1e-15


class TestAmoeba:
    """Test suite for the amoeba and its boundary."""

    def test_contains(self):
        assert amoeba_contains(0.0, 0.0)
        assert not amoeba_contains(2.0, 0.0)
        assert not amoeba_contains(-3.0, -3.0)

    @pytest.mark.parametrize(
        "x, y, kind",
        [
            (0.0, LN2, BoundaryKind.Y_MINUS_X),
            (LN2, 0.0, BoundaryKind.X_MINUS_Y),
            (-LN2, -LN2, BoundaryKind.X_PLUS_Y),
            (0.0, 0.0, BoundaryKind.NONE),
        ],
    )
    def test_boundary_class(self, x, y, kind):
        """Each boundary equation is recognised; interior points are NONE."""
        assert amoeba_boundary_class(x, y) is kind

    def test_forced_arguments(self):
        assert forced_arguments(BoundaryKind.Y_MINUS_X) == (0.0, PI)
        assert forced_arguments(BoundaryKind.X_MINUS_Y) == (PI, 0.0)
        assert forced_arguments(BoundaryKind.X_PLUS_Y) == (PI, PI)
        assert forced_arguments(BoundaryKind.NONE) is None

    def test_lift_on_boundary(self):
        """Over e^y - e^x = 1 the arguments are forced to (0, pi)."""
        point = amoeba_lift(0.0, LN2)
        assert point.phi == pytest.approx(0.0, abs=1e-12)
        assert point.psi == pytest.approx(PI, abs=1e-12)

    def test_lift_sheets(self):
        """The origin lifts to O on the lower sheet and O' on the upper one."""
        lower = amoeba_lift(0.0, 0.0)
        upper = amoeba_lift(0.0, 0.0, upper=True)
        assert (lower.phi, lower.psi) == pytest.approx(O_CENTER, abs=1e-12)
        assert (upper.phi, upper.psi) == pytest.approx(O_PRIME, abs=1e-12)

    def test_lift_outside(self):
        with pytest.raises(DomainError):
            amoeba_lift(2.0, 0.0)


class TestCoamoeba:
    """Test suite for the coamoeba and the inverse argument map."""

    def test_lift_barycentre(self):
        """The arguments of O lift back to the origin."""
        point = coamoeba_lift(*O_CENTER)
        assert point.x == pytest.approx(0.0, abs=1e-14)
        assert point.y == pytest.approx(0.0, abs=1e-14)

    def test_lift_is_on_line(self):
        point = coamoeba_lift(0.5, PI + 0.2)
        assert line_residual(point) < 1e-14

    def test_lift_outside(self):
        """Arguments off the open triangles have no lift."""
        with pytest.raises(DomainError):
            coamoeba_lift(PI / 2.0, PI / 2.0)

    def test_contains_isolated_points(self):
        """The three real argument pairs belong to the coamoeba."""
        assert coamoeba_contains(0.0, PI)
        assert coamoeba_contains(PI, 0.0)
        assert coamoeba_contains(PI, PI)
        assert coamoeba_contains(TAU, PI)
        assert not coamoeba_contains(PI / 2.0, PI / 2.0)

    def test_chart(self):
        """z = i maps to (0, ln sqrt2, pi/2, 5pi/4)."""
        point = chart_from_complex(0.0, 1.0)
        expected = make_point(0.0, math.log(math.sqrt(2.0)), PI / 2.0, 5.0 * PI / 4.0)
        assert ambient_distance(point, expected) < 1e-12

    def test_chart_excludes_minus_one(self):
        with pytest.raises(DomainError):
            chart_from_complex(-1.0, 0.0)


class TestSubdivision:
    """Test suite for H1/H2/H3, Leg/Triangle and Lower/Upper."""

    def test_origin_in_every_piece(self):
        point = make_point(0.0, 0.0, *O_CENTER)
        assert classify_major(point) == frozenset(Major)

    def test_h3_point(self):
        """z = -3 sits over (ln3, ln2), inside H3 only."""
        assert classify_major(chart_from_complex(-3.0, 0.0)) == frozenset({Major.H3})

    def test_off_line(self):
        with pytest.raises(DomainError):
            classify_major(make_point(0.0, 0.0, 0.0, 0.0))

    def test_sub_pieces(self):
        """Leg above Gamma1, Triangle below, both on it."""
        assert classify_sub(WORKED_POINT) == frozenset({Sub.LEG})
        assert classify_sub(make_point(0.0, 0.0, *O_CENTER)) == frozenset({Sub.TRIANGLE})
        assert classify_sub(gamma1_point(-0.3)) == frozenset({Sub.LEG, Sub.TRIANGLE})

    def test_sub_outside_h1(self):
        with pytest.raises(DomainError):
            classify_sub(chart_from_complex(-3.0, 0.0))

    def test_sides(self):
        assert classify_side(2.0 * PI / 3.0, 7.0 * PI / 6.0) == frozenset({Side.LOWER})
        assert classify_side(4.0 * PI / 3.0, 5.0 * PI / 6.0) == frozenset({Side.UPPER})
        assert classify_side(PI, PI) == frozenset({Side.LOWER, Side.UPPER})

    def test_side_outside(self):
        with pytest.raises(DomainError):
            classify_side(PI / 2.0, PI / 2.0)

    def test_region_tag_on_gamma1(self):
        tag = region_tag(gamma1_point(-0.3))
        assert tag.major == frozenset({Major.H1})
        assert tag.sub == frozenset({Sub.LEG, Sub.TRIANGLE})
        assert tag.side == frozenset({Side.LOWER})

    def test_region_tag_through_lambda(self):
        """Sub and side of an H2 point are read off its H1 representative."""
        tag = region_tag(lambda_map(WORKED_POINT))
        assert tag.major == frozenset({Major.H2})
        assert tag.sub == frozenset({Sub.LEG})
        assert tag.side == frozenset({Side.LOWER})

    def test_region_tag_serialization(self):
        tag = region_tag(make_point(0.0, 0.0, *O_CENTER))
        assert tag.serialize() == ("h1|h2|h3", "tri", "lo")


class TestLambda:
    """Test suite for the order-three automorphism."""

    def test_fixes_barycentre(self):
        point = make_point(0.0, 0.0, *O_CENTER)
        assert ambient_distance(lambda_map(point), point) < 1e-12

    def test_order_three(self):
        point = make_point(0.3, -1.7, 0.4, 5.9)
        thrice = lambda_map(lambda_map(lambda_map(point)))
        assert ambient_distance(thrice, point) < 1e-12

    def test_inverse(self):
        point = make_point(-2.5, 0.8, 3.0, 1.2)
        assert ambient_distance(lambda_inv(lambda_map(point)), point) < 1e-12
        assert ambient_distance(lambda_map(lambda_inv(point)), point) < 1e-12

    def test_preserves_line(self):
        assert line_residual(lambda_map(WORKED_POINT)) < 1e-14
        assert line_residual(lambda_inv(WORKED_POINT)) < 1e-14


class TestCurves:
    """Test suite for Gamma1, W_c and the argument slopes."""

    def test_gamma1_residual_at_barycentre(self):
        assert gamma1_residual(*O_CENTER) == pytest.approx(0.375)

    def test_gamma1_residual_on_curve(self):
        point = gamma1_point(-0.3)
        assert abs(gamma1_residual(point.phi, point.psi)) < 1e-12

    def test_gamma1_ends(self):
        """Gamma1 runs from x = -ln2 to x = 0."""
        x_plus, x_minus = wc_boundary_x(LN2)
        assert x_plus == pytest.approx(0.0, abs=1e-14)
        assert x_minus == pytest.approx(-LN2, abs=1e-14)

    def test_wc_requires_c_above_ln2(self):
        with pytest.raises(DomainError):
            wc_boundary_x(0.5)

    def test_endpoint_slopes(self):
        """Slope 1/2 at the (0, pi) end and -1 at the (pi, pi) end of Gamma1."""
        assert argwc_slope(0.0, LN2) == pytest.approx(0.5, abs=1e-12)
        assert argwc_slope(-LN2, LN2) == pytest.approx(-1.0, abs=1e-12)

    def test_slope_forms_agree(self):
        """The x-form and the angle form of the slope match inside Gamma1."""
        point = gamma1_point(-0.3)
        from_x = argwc_slope(-0.3, LN2)
        from_angles = argwc_slope_phi(point.phi, point.psi, 0.5)
        assert from_angles == pytest.approx(from_x, rel=1e-8)

    def test_slope_derivative_positive(self):
        assert argwc_slope_derivative_sign(-0.3, LN2) == 1
        assert argwc_slope_derivative(-0.3, LN2) > 0.0


if __name__ == "__main__":
    pytest.main([__file__])
