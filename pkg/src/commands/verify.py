"""
`verify`: run the verification suite on coamoeba-grid plus seam-curve samples.
"""
import argparse
import sys

from ..config import TOLERANCES
from ..pydantic_models.geometry import SamplingStrategy
from ..pydantic_models.reports import IsotopyParams, VerificationReport
from ..services.frame_storage import write_report
from ..services.sampling import sample_line
from ..services.verification import run_suite
from ..utils.common import EXIT_OK, EXIT_VERIFICATION_FAILED, handle_command_errors
from .arguments import add_logging_argument, apply_logging, positive_float, positive_int

# seam curves get this many points per grid axis of the coamoeba grid
SEAM_DENSITY = 10


def add_parser(subparsers) -> argparse.ArgumentParser:
    parser = subparsers.add_parser("verify", help="run every numerical check and report")
    parser.add_argument("--n", type=positive_int, default=100, help="coamoeba grid nodes per axis")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--t-steps", type=positive_int, default=4, help="time grid j/J, j = 0..J")
    parser.add_argument("--report", default=None, help="JSON report to write")
    parser.add_argument("--root-tol", type=positive_float, default=TOLERANCES.root_tol)
    parser.add_argument("--seam-tol", type=positive_float, default=TOLERANCES.seam_tol)
    add_logging_argument(parser)
    parser.set_defaults(handler=run)
    return parser


def print_summary(report: VerificationReport) -> None:
    for check in report.checks:
        status = "PASS" if check.passed else "FAIL"
        print(
            f"{status} {check.name}: max {check.max_residual:.3e} "
            f"(tolerance {check.tolerance:.1e}, n={check.sample_count})"
        )
    print("overall:", "PASS" if report.overall else "FAIL")
    sys.stdout.flush()


@handle_command_errors("verify")
def run(args: argparse.Namespace) -> int:
    apply_logging(args)
    params = IsotopyParams(root_tol=args.root_tol, seam_tol=args.seam_tol)
    grid = [j / args.t_steps for j in range(args.t_steps + 1)]
    seams = sample_line(SamplingStrategy.SEAM_CURVES, SEAM_DENSITY * args.n, args.seed)
    samples = sample_line(SamplingStrategy.COAMOEBA_GRID, args.n, args.seed).merge(seams)
    report = run_suite(samples, params, grid, seam_samples=seams)
    if args.report:
        write_report(args.report, report)
    print_summary(report)
    return EXIT_OK if report.overall else EXIT_VERIFICATION_FAILED
