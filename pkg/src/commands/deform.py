"""
`deform`: map the rows of a t = 0 frame by the deformation at time t.
"""
import argparse
from typing import List, Tuple

import numpy as np

from ..config import TOLERANCES
from ..geometry.complex_line import relative_line_residuals
from ..geometry.isotopy import DEFAULT_PARAMS, DeformationPlan
from ..pydantic_models.reports import IsotopyParams
from ..services.frame_storage import Frame, read_frame, write_frame
from ..utils.common import EXIT_OK, handle_command_errors
from ..utils.exceptions import FrameFormatError
from ..utils.logger import logger
from .arguments import add_logging_argument, apply_logging, unit_interval


def add_parser(subparsers) -> argparse.ArgumentParser:
    parser = subparsers.add_parser("deform", help="apply the deformation at time t to a frame")
    parser.add_argument("--in", dest="input", required=True, help="frame file with t = 0 rows")
    parser.add_argument("--t", type=unit_interval, required=True, help="deformation time in [0, 1]")
    parser.add_argument("--out", required=True, help="frame file to write")
    add_logging_argument(parser)
    parser.set_defaults(handler=run)
    return parser


def rows_on_line(frame: Frame) -> Tuple[np.ndarray, List[Tuple[str, str, str]]]:
    """Rows of a t = 0 frame that lie on H; the others are dropped with a warning."""
    if len(frame) and np.any(frame.times != 0.0):
        raise FrameFormatError("Input frame must hold t = 0 rows")
    if len(frame) == 0:
        return frame.points, []
    keep = relative_line_residuals(frame.points) < TOLERANCES.h_tol
    skipped = int(np.count_nonzero(~keep))
    if skipped:
        logger.warning(
            f"Skipped {skipped} rows off H",
            extra_fields={"event_type": "rows_skipped", "skipped": skipped, "rows": len(frame)},
        )
    return frame.points[keep], [tag for tag, ok in zip(frame.tags, keep) if ok]


def deform_frame(points: np.ndarray, t: float, params: IsotopyParams = DEFAULT_PARAMS) -> np.ndarray:
    if points.shape[0] == 0:
        return points
    return DeformationPlan.build(points, params).at(t, strict=True).images


@handle_command_errors("deform")
def run(args: argparse.Namespace) -> int:
    apply_logging(args)
    points, tags = rows_on_line(read_frame(args.input))
    write_frame(args.out, args.t, deform_frame(points, args.t), tags)
    return EXIT_OK
