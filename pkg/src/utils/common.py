"""
Common decorators for command handlers
"""
import sys
from functools import wraps
from typing import Callable

from .exceptions import IsotopyException, SeamError
from .logger import log_error_with_context, logger

EXIT_OK = 0
EXIT_VERIFICATION_FAILED = 1
EXIT_USAGE = 2


def handle_command_errors(operation_name: str = "command"):
    """
    Decorator converting exceptions raised by a command into exit codes.

    Branch disagreement is a verification failure (exit 1); every other
    library, file or value error is a usage/IO error (exit 2).

    Args:
        operation_name: Name of the command for logging purposes
    """
    def decorator(func: Callable[..., int]) -> Callable[..., int]:
        @wraps(func)
        def wrapper(*args, **kwargs) -> int:
            try:
                return func(*args, **kwargs)
            except SeamError as e:
                log_error_with_context(
                    f"{operation_name} failed: {e.message}",
                    context={"error_type": "SeamError", "detail": e.detail},
                )
                print(f"error: {e.message}", file=sys.stderr)
                return EXIT_VERIFICATION_FAILED
            except IsotopyException as e:
                log_error_with_context(
                    f"{operation_name} failed: {e.message}",
                    context={"error_type": type(e).__name__, "detail": e.detail},
                )
                print(f"error: {e.message}", file=sys.stderr)
                return EXIT_USAGE
            except (OSError, ValueError) as e:
                logger.error(f"{operation_name} failed: {e}")
                print(f"error: {e}", file=sys.stderr)
                return EXIT_USAGE
            except Exception as e:
                logger.error(f"Unexpected error in {operation_name}: {str(e)}")
                print(f"error: {e}", file=sys.stderr)
                return EXIT_USAGE
        return wrapper
    return decorator
