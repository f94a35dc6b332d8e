"""
`sample`: write a sample set of H as a frame file at t = 0.
"""
import argparse

from ..pydantic_models.geometry import SamplingStrategy
from ..services.frame_storage import write_frame
from ..services.sampling import sample_line
from ..utils.common import EXIT_OK, handle_command_errors
from .arguments import add_logging_argument, apply_logging, positive_int


def add_parser(subparsers) -> argparse.ArgumentParser:
    parser = subparsers.add_parser("sample", help="sample points of H and write them as a frame")
    parser.add_argument(
        "--strategy",
        choices=[strategy.value for strategy in SamplingStrategy],
        default=SamplingStrategy.COAMOEBA_GRID.value,
    )
    parser.add_argument("--n", type=positive_int, default=100, help="nodes per grid axis or per curve")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--out", required=True, help="frame file to write")
    add_logging_argument(parser)
    parser.set_defaults(handler=run)
    return parser


@handle_command_errors("sample")
def run(args: argparse.Namespace) -> int:
    apply_logging(args)
    samples = sample_line(SamplingStrategy(args.strategy), args.n, args.seed)
    write_frame(args.out, 0.0, samples.points, samples.serialized_tags())
    return EXIT_OK
