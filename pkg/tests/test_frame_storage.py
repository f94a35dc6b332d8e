"""
Unit tests for frame files and report files.
"""
import json
import sys
from pathlib import Path
import numpy as np
import pytest
from unittest.mock import patch

# Add project root to Python path for tests
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from src.pydantic_models.geometry import RegionTag, SamplingStrategy
from src.pydantic_models.reports import CheckResult, VerificationReport
from src.services.frame_storage import FRAME_HEADER, read_frame, write_frame, write_report
from src.services.sampling import sample_line
from src.utils.exceptions import FrameFormatError


class TestFrames:
    """Test suite for frame CSV files."""

    @pytest.fixture
    def samples(self):
        return sample_line(SamplingStrategy.COAMOEBA_GRID, 6)

    def test_round_trip_is_exact(self, samples, tmp_path: Path):
        """Seventeen significant digits reproduce every float bit for bit."""
        path = write_frame(tmp_path / "frame.csv", 0.0, samples.points, samples.serialized_tags())
        frame = read_frame(path)
        np.testing.assert_array_equal(frame.points, samples.points)
        assert np.all(frame.times == 0.0)
        assert frame.tags == samples.serialized_tags()
        assert len(frame) == len(samples)

    def test_tags_parse_back(self, samples, tmp_path: Path):
        path = write_frame(tmp_path / "frame.csv", 0.0, samples.points, samples.serialized_tags())
        assert [RegionTag.parse(*tag) for tag in read_frame(path).tags] == samples.tags

    def test_header(self, samples, tmp_path: Path):
        path = write_frame(tmp_path / "frame.csv", 0.25, samples.points, samples.serialized_tags())
        first_line = path.read_text(encoding="utf-8").splitlines()[0]
        assert tuple(first_line.split(",")) == FRAME_HEADER

    def test_no_temporary_left_behind(self, samples, tmp_path: Path):
        write_frame(tmp_path / "frame.csv", 1.0, samples.points, samples.serialized_tags())
        assert sorted(p.name for p in tmp_path.iterdir()) == ["frame.csv"]

    def test_failed_write_keeps_old_file(self, samples, tmp_path: Path):
        """A failing rename leaves the previous frame untouched and no temporary file."""
        path = tmp_path / "frame.csv"
        path.write_text("old", encoding="utf-8")
        with patch.object(Path, "replace", side_effect=OSError("disk full")):
            with pytest.raises(OSError):
                write_frame(path, 0.0, samples.points, samples.serialized_tags())
        assert path.read_text(encoding="utf-8") == "old"
        assert not (tmp_path / "frame.csv.tmp").exists()

    def test_tag_count_mismatch(self, samples, tmp_path: Path):
        with pytest.raises(FrameFormatError):
            write_frame(tmp_path / "frame.csv", 0.0, samples.points, samples.serialized_tags()[:-1])

    def test_empty_frame(self, tmp_path: Path):
        path = write_frame(tmp_path / "empty.csv", 0.0, np.empty((0, 4)), [])
        frame = read_frame(path)
        assert len(frame) == 0
        assert frame.points.shape == (0, 4)


class TestMalformedFrames:
    """Test suite for rejected frame files."""

    def test_bad_header(self, tmp_path: Path):
        path = tmp_path / "bad.csv"
        path.write_text("a,b,c\n", encoding="utf-8")
        with pytest.raises(FrameFormatError):
            read_frame(path)

    def test_short_row(self, tmp_path: Path):
        path = tmp_path / "bad.csv"
        path.write_text(",".join(FRAME_HEADER) + "\n0,1,2\n", encoding="utf-8")
        with pytest.raises(FrameFormatError):
            read_frame(path)

    def test_bad_float(self, tmp_path: Path):
        path = tmp_path / "bad.csv"
        path.write_text(",".join(FRAME_HEADER) + "\n0,abc,0,0,0,h1,tri,lo\n", encoding="utf-8")
        with pytest.raises(FrameFormatError):
            read_frame(path)

    def test_unknown_region_tag(self, tmp_path: Path):
        path = tmp_path / "bad.csv"
        path.write_text(",".join(FRAME_HEADER) + "\n0,0,0,0,0,h9,tri,lo\n", encoding="utf-8")
        with pytest.raises(FrameFormatError):
            read_frame(path)

    def test_empty_file(self, tmp_path: Path):
        path = tmp_path / "bad.csv"
        path.write_text("", encoding="utf-8")
        with pytest.raises(FrameFormatError):
            read_frame(path)


class TestReports:
    """Test suite for JSON reports."""

    def test_write_report(self, tmp_path: Path):
        check = CheckResult(
            name="identity_at_t0", max_residual=1e-16, tolerance=1e-12, passed=True, sample_count=4
        )
        path = write_report(tmp_path / "report.json", VerificationReport.from_checks([check]))
        payload = json.loads(path.read_text(encoding="utf-8"))
        assert payload["overall"] is True
        assert payload["checks"][0]["pass"] is True
        assert payload["checks"][0]["name"] == "identity_at_t0"


if __name__ == "__main__":
    pytest.main([__file__])
