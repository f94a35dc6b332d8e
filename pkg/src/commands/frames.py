"""
`frames`: sample H and write the deformation at t = j/K for j = 0..K.
"""
import argparse
from pathlib import Path

from ..geometry.isotopy import DEFAULT_PARAMS, DeformationPlan
from ..pydantic_models.geometry import SamplingStrategy
from ..services.frame_storage import write_frame
from ..services.sampling import sample_line
from ..utils.common import EXIT_OK, handle_command_errors
from ..utils.logger import log_frame_written
from .arguments import add_logging_argument, apply_logging, positive_int


def add_parser(subparsers) -> argparse.ArgumentParser:
    parser = subparsers.add_parser("frames", help="write K + 1 frames of the deformation")
    parser.add_argument("--steps", type=positive_int, required=True, help="number of time steps K")
    parser.add_argument("--n", type=positive_int, default=100, help="nodes per grid axis or per curve")
    parser.add_argument("--out-dir", required=True, help="directory receiving frame_0000.csv ...")
    parser.add_argument(
        "--strategy",
        choices=[strategy.value for strategy in SamplingStrategy],
        default=SamplingStrategy.COAMOEBA_GRID.value,
    )
    parser.add_argument("--seed", type=int, default=0)
    add_logging_argument(parser)
    parser.set_defaults(handler=run)
    return parser


def frame_path(out_dir: Path, index: int) -> Path:
    return out_dir / f"frame_{index:04d}.csv"


@handle_command_errors("frames")
def run(args: argparse.Namespace) -> int:
    apply_logging(args)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    samples = sample_line(SamplingStrategy(args.strategy), args.n, args.seed)
    plan = DeformationPlan.build(samples.points, DEFAULT_PARAMS)
    tags = samples.serialized_tags()
    for index in range(args.steps + 1):
        t = index / args.steps
        step = plan.at(t, strict=True)
        path = write_frame(frame_path(out_dir, index), t, step.images, tags)
        log_frame_written(str(path), t, len(tags), step.max_seam_residual)
    return EXIT_OK
