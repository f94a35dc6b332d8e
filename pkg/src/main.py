"""
Command-line entry point: sample, deform, frames and verify.

Exit codes: 0 success, 1 verification failure, 2 usage or I/O error.
"""
import argparse
import sys
from typing import List, Optional

from .commands import deform, frames, sample, verify
from .config import get_settings
from .utils.common import EXIT_USAGE


def create_parser() -> argparse.ArgumentParser:
    """Create the argument parser with one subcommand per command module."""
    settings = get_settings()
    parser = argparse.ArgumentParser(
        prog="isotopy",
        description=f"{settings.app_title}: deform the complex line onto its phase tropical limit",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {settings.app_version}")
    subparsers = parser.add_subparsers(dest="command", required=True)
    for module in (sample, deform, frames, verify):
        module.add_parser(subparsers)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Parse arguments, run the selected command and return its exit code."""
    parser = create_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE
    return args.handler(args)


if __name__ == "__main__":
    sys.exit(main())
