"""
Unit tests for the phase tropical line H_trop and its subdivision.
"""
import sys
from pathlib import Path
import numpy as np
import pytest

# Add project root to Python path for tests
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from src.geometry.complex_line import lambda_map, make_point
from src.geometry.constants import O_CENTER, PI
from src.geometry.phase_tropical import (
    htrop_distance,
    htrop_distances,
    htrop_part_masks,
    htrop_subdivision,
    stratum_distances,
)
from src.pydantic_models.geometry import TropPart, TropStratum
from src.utils.exceptions import DomainError


class TestDistance:
    """Test suite for distances to the four strata."""

    @pytest.mark.parametrize(
        "coordinates, stratum",
        [
            ((-3.0, 0.0, 1.0, PI), TropStratum.LEG1),
            ((0.0, -2.0, PI, 4.0), TropStratum.LEG2),
            ((2.0, 2.0, 1.0, 1.0 + PI), TropStratum.LEG3),
            ((0.0, 0.0, *O_CENTER), TropStratum.VERTEX),
        ],
    )
    def test_points_on_strata(self, coordinates, stratum):
        """Points built on a stratum have distance 0 to it."""
        distance, nearest = htrop_distance(make_point(*coordinates))
        assert distance == pytest.approx(0.0, abs=1e-12)
        assert nearest is stratum

    def test_displaced_leg_point(self):
        """Lifting a Leg1 point off y = 0 costs exactly the displacement."""
        distance, nearest = htrop_distance(make_point(-3.0, 0.2, 1.0, PI))
        assert distance == pytest.approx(0.2)
        assert nearest is TropStratum.LEG1

    def test_wrapped_leg3_angle(self):
        """psi = phi + pi is read modulo 2pi."""
        distance, _ = htrop_distance(make_point(1.0, 1.0, 4.0, 4.0 + PI))
        assert distance == pytest.approx(0.0, abs=1e-12)

    def test_vertex_off_coamoeba(self):
        """At the origin the distance is the torus distance to the closed triangles."""
        distance, _ = htrop_distance(make_point(0.0, 0.0, PI / 2.0, PI / 2.0))
        assert distance == pytest.approx(PI / 2.0)

    def test_table_shape(self):
        points = np.array([[-3.0, 0.0, 1.0, PI], [0.0, 0.0, *O_CENTER]])
        assert stratum_distances(points).shape == (2, 4)
        distances, nearest = htrop_distances(points)
        assert distances.shape == (2,)
        assert list(nearest) == [0, 3]


class TestSubdivision:
    """Test suite for H1trop, H2trop and H3trop."""

    def test_leg1_point(self):
        assert htrop_subdivision(make_point(-1.0, 0.0, 2.0 * PI / 3.0, PI)) == frozenset({TropPart.H1TROP})

    def test_barycentre_in_every_part(self):
        assert htrop_subdivision(make_point(0.0, 0.0, *O_CENTER)) == frozenset(TropPart)

    def test_lambda_moves_parts(self):
        """lambda carries an H1trop point into H2trop."""
        point = lambda_map(make_point(-1.0, 0.0, 2.0 * PI / 3.0, PI))
        assert htrop_subdivision(point) == frozenset({TropPart.H2TROP})

    def test_leg3_point(self):
        assert htrop_subdivision(make_point(2.0, 2.0, 1.0, 1.0 + PI)) == frozenset({TropPart.H3TROP})

    def test_off_htrop(self):
        with pytest.raises(DomainError):
            htrop_subdivision(make_point(1.0, 1.0, 0.0, 0.0))

    def test_masks(self):
        points = np.array([[-1.0, 0.0, 2.0 * PI / 3.0, PI], [0.0, -1.0, PI, 5.0 * PI / 3.0]])
        masks = htrop_part_masks(points)
        assert masks.tolist() == [[True, False, False], [False, True, False]]


if __name__ == "__main__":
    pytest.main([__file__])
