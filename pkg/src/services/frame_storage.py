"""
Frame files (CSV) and verification reports (JSON).

Frames hold one row per point: t, x, y, phi, psi, major, sub, side. Floats are
written with 17 significant digits so reading a frame back is bit-exact.
Every write goes to a temporary sibling first and is renamed into place.
"""
import csv
import io
from dataclasses import dataclass
from pathlib import Path
from typing import List, Sequence, Tuple, Union

import numpy as np

from ..pydantic_models.geometry import RegionTag
from ..pydantic_models.reports import VerificationReport
from ..utils.exceptions import FrameFormatError
from ..utils.logger import logger

FRAME_HEADER = ("t", "x", "y", "phi", "psi", "major", "sub", "side")

PathLike = Union[str, Path]
TagStrings = Tuple[str, str, str]


@dataclass
class Frame:
    """Rows of a frame file."""

    times: np.ndarray
    points: np.ndarray
    tags: List[TagStrings]

    def __len__(self) -> int:
        return self.points.shape[0]


def _format_float(value: float) -> str:
    return format(float(value), ".17g")


def _atomic_write(path: Path, text: str) -> None:
    """Write text through a .tmp sibling and an atomic rename."""
    temp_path = path.with_name(path.name + ".tmp")
    try:
        with open(temp_path, "w", encoding="utf-8", newline="") as f:
            f.write(text)
        temp_path.replace(path)
        logger.debug(f"Wrote {path}")
    except OSError as e:
        logger.error(f"Error writing {path}: {e}")
        temp_path.unlink(missing_ok=True)
        raise


def write_frame(path: PathLike, t: float, points: np.ndarray, tags: Sequence[TagStrings]) -> Path:
    """
    Write one frame.

    Args:
        path: destination file
        t: deformation time stored in every row
        points: array (n, 4) of x, y, phi, psi
        tags: serialized region tags, one per row

    Returns:
        The path written
    """
    path = Path(path)
    points = np.asarray(points, dtype=float).reshape(-1, 4)
    if len(tags) != points.shape[0]:
        raise FrameFormatError("Frame needs one tag per row", detail={"rows": points.shape[0], "tags": len(tags)})
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(FRAME_HEADER)
    time_text = _format_float(t)
    for row, tag in zip(points, tags):
        writer.writerow([time_text, *(_format_float(value) for value in row), *tag])
    _atomic_write(path, buffer.getvalue())
    logger.info(f"Saved frame t={time_text} with {points.shape[0]} rows to {path}")
    return path


def read_frame(path: PathLike) -> Frame:
    """Parse a frame file; any malformed row raises FrameFormatError."""
    path = Path(path)
    with open(path, "r", encoding="utf-8", newline="") as f:
        reader = csv.reader(f)
        header = next(reader, None)
        if header is None or tuple(header) != FRAME_HEADER:
            raise FrameFormatError(f"{path} does not start with the frame header", detail={"header": header})
        times, values, tags = [], [], []
        for line_number, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(FRAME_HEADER):
                raise FrameFormatError(f"{path}:{line_number}: expected {len(FRAME_HEADER)} fields, got {len(row)}")
            try:
                numbers = [float(field) for field in row[:5]]
            except ValueError as e:
                raise FrameFormatError(f"{path}:{line_number}: {e}") from e
            try:
                RegionTag.parse(row[5], row[6], row[7])
            except ValueError as e:
                raise FrameFormatError(f"{path}:{line_number}: bad region tag {row[5:]}") from e
            times.append(numbers[0])
            values.append(numbers[1:])
            tags.append((row[5], row[6], row[7]))
    logger.debug(f"Loaded {len(values)} rows from {path}")
    return Frame(
        times=np.array(times, dtype=float),
        points=np.array(values, dtype=float).reshape(-1, 4),
        tags=tags,
    )


def write_report(path: PathLike, report: VerificationReport) -> Path:
    path = Path(path)
    _atomic_write(path, report.model_dump_json(by_alias=True, indent=2) + "\n")
    logger.info(f"Saved verification report to {path}")
    return path
