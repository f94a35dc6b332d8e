"""
Unit tests for the verification suite and its helpers.
"""
import math
import sys
from pathlib import Path
import numpy as np
import pytest
from pydantic import ValidationError
from unittest.mock import patch

# Add project root to Python path for tests
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from src.geometry.phase_tropical import htrop_distances
from src.pydantic_models.geometry import SamplingStrategy
from src.pydantic_models.reports import CheckResult, IsotopyParams, VerificationReport
from src.services.sampling import SampleSet, sample_line
from src.services.verification import (
    VerificationSuite,
    continuity_proxy,
    htrop_stratum_samples,
    injectivity_violations,
    run_suite,
)
from src.utils.exceptions import DomainError


def _samples(n: int, seam_n: int, seed: int = 0):
    seams = sample_line(SamplingStrategy.SEAM_CURVES, seam_n, seed)
    grid = sample_line(SamplingStrategy.COAMOEBA_GRID, n, seed)
    return grid.merge(seams), seams


def _empty() -> SampleSet:
    return SampleSet(np.empty((0, 4)), [], np.empty((0, 2)), SamplingStrategy.COAMOEBA_GRID, 0)


@pytest.fixture(scope="module")
def report() -> VerificationReport:
    samples, seams = _samples(20, 60)
    return run_suite(samples, seam_samples=seams)


class TestFullRun:
    """Test suite for a complete verification run."""

    def test_overall_pass(self, report):
        """Every check passes on a modest coamoeba grid plus seam curves."""
        assert report.overall, report.failed()
        assert report.failed() == []

    def test_checks_are_named_and_populated(self, report):
        names = [check.name for check in report.checks]
        assert len(names) == len(set(names))
        assert "endpoint_on_htrop" in names
        assert "leg_triangle_seam" in names
        assert all(check.sample_count > 0 for check in report.checks)

    def test_report_json_uses_pass_key(self, report):
        payload = report.model_dump(by_alias=True)
        assert "pass" in payload["checks"][0]
        assert payload["overall"] is True

    def test_coarse_roots_fail(self):
        """A loose bisection tolerance breaks the endpoint and the Leg/Triangle seam."""
        samples, seams = _samples(10, 30)
        coarse = run_suite(samples, IsotopyParams(root_tol=1e-2), seam_samples=seams)
        assert not coarse.overall
        assert "endpoint_on_htrop" in coarse.failed()
        assert "leg_triangle_seam" in coarse.failed()


class TestChecks:
    """Test suite for individual checks and failure handling."""

    @pytest.fixture
    def suite(self) -> VerificationSuite:
        samples, seams = _samples(8, 20)
        return VerificationSuite(samples, seam_samples=seams)

    def test_vacuous_check_fails(self):
        """A check with no applicable sample fails with sample_count 0."""
        suite = VerificationSuite(_empty(), seam_samples=_empty())
        result = suite.check_identity_at_t0()
        assert not result.passed
        assert result.sample_count == 0
        assert math.isnan(result.max_residual)
        assert not suite.check_mesh_stretch_bounded().passed

    def test_broken_lambda_is_caught(self, suite):
        with patch("src.services.verification.lambda_map_many", side_effect=lambda points: points + 0.1):
            result = suite.check_lambda_order_three()
        assert not result.passed
        assert result.max_residual > 0.1

    def test_raising_check_is_recorded(self, suite):
        """Library errors inside a check become a failed result."""
        with patch("src.services.verification.htrop_distances", side_effect=DomainError("boom")):
            result = suite._run_check(suite.check_endpoint_on_htrop)
        assert result.name == "endpoint_on_htrop"
        assert not result.passed
        assert "boom" in result.description

    def test_worked_point_check(self, suite):
        assert suite.check_worked_leg_point().passed

    def test_bad_time_grid(self):
        samples, seams = _samples(4, 10)
        with pytest.raises(DomainError):
            VerificationSuite(samples, t_grid=(0.0, 1.5), seam_samples=seams)

    def test_grid_always_has_endpoints(self):
        samples, seams = _samples(4, 10)
        suite = VerificationSuite(samples, t_grid=(0.5,), seam_samples=seams)
        assert suite.t_grid == (0.0, 0.5, 1.0)


class TestHelpers:
    """Test suite for the continuity proxy, injectivity and stratum samples."""

    def test_continuity_needs_edges(self):
        grid = sample_line(SamplingStrategy.COAMOEBA_GRID, 6)
        bare = SampleSet(grid.points, grid.tags, np.empty((0, 2)), grid.strategy, grid.seed)
        with pytest.raises(DomainError):
            continuity_proxy(bare, 0.5)

    def test_continuity_at_start(self):
        grid = sample_line(SamplingStrategy.COAMOEBA_GRID, 10)
        assert continuity_proxy(grid, 0.0) == pytest.approx(1.0, abs=1e-9)

    def test_continuity_bounded(self):
        grid = sample_line(SamplingStrategy.COAMOEBA_GRID, 10)
        assert continuity_proxy(grid, 1.0) < 1e3

    def test_injectivity_violation_counted(self):
        domain = np.array([[0.0, 0.0, 0.0, 0.0], [1.0, 1.0, 1.0, 1.0]])
        images = np.zeros((2, 4))
        assert injectivity_violations(domain, images, 0.05, 1e-6) == 1
        assert injectivity_violations(domain, domain, 0.05, 1e-6) == 0

    def test_stratum_samples_on_htrop(self):
        for name, points in htrop_stratum_samples(seed=3, n=32).items():
            distances, _ = htrop_distances(points)
            assert np.max(distances) < 1e-12, name


class TestReportModel:
    """Test suite for the report models."""

    def test_overall_must_be_conjunction(self):
        check = CheckResult(name="x", max_residual=1.0, tolerance=0.5, passed=False, sample_count=3)
        with pytest.raises(ValidationError):
            VerificationReport(checks=[check], overall=True)

    def test_empty_report_fails(self):
        assert VerificationReport.from_checks([]).overall is False


if __name__ == "__main__":
    pytest.main([__file__])
