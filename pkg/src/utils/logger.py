import json
import logging
import sys
from datetime import datetime
from typing import Any, Dict, Optional

from ..config import get_settings

SERVICE_NAME = "phase-tropical-isotopy"


class StructuredFormatter(logging.Formatter):
    """One JSON object per record; run_id and extra_fields are merged in."""

    def __init__(self, service_name: str = SERVICE_NAME, version: str = "1.0.0"):
        self.service_name = service_name
        self.version = version
        super().__init__()

    def format(self, record: logging.LogRecord) -> str:
        entry: Dict[str, Any] = {
            "timestamp": datetime.fromtimestamp(record.created).isoformat(),
            "level": record.levelname,
            "service": self.service_name,
            "version": self.version,
            "module": record.module,
            "function": record.funcName,
            "message": record.getMessage(),
        }
        run_id = getattr(record, "run_id", None)
        if run_id:
            entry["run_id"] = run_id
        entry.update(getattr(record, "extra_fields", {}))
        if record.exc_info and record.exc_info[0]:
            entry["exception"] = {
                "type": record.exc_info[0].__name__,
                "message": str(record.exc_info[1]),
                "traceback": self.formatException(record.exc_info),
            }
        # numpy scalars and paths fall back to str
        return json.dumps(entry, ensure_ascii=False, default=str)


class StructuredLogger:
    """Logger writing plain lines or JSON records to stderr (or stdout).

    Frames and reports own stdout only when the caller asks for it, so the
    default stream is stderr.
    """

    def __init__(
        self,
        name: str = SERVICE_NAME,
        level: str = "INFO",
        version: str = "1.0.0",
        enable_json: bool = False,
        stream: str = "stderr",
    ):
        self.name = name
        self.version = version
        self.enable_json = enable_json
        self.stream = stream
        self.logger = self._build(level)

    def _build(self, level: str) -> logging.Logger:
        built = logging.getLogger(self.name)
        if built.hasHandlers():
            built.handlers.clear()

        handler = logging.StreamHandler(sys.stdout if self.stream == "stdout" else sys.stderr)
        if self.enable_json:
            handler.setFormatter(StructuredFormatter(self.name, self.version))
        else:
            handler.setFormatter(
                logging.Formatter(fmt="[%(levelname)s] %(asctime)s - %(message)s", datefmt="%Y-%m-%d %H:%M:%S")
            )
        built.addHandler(handler)
        built.propagate = False
        self._apply_level(built, level)
        return built

    @staticmethod
    def _apply_level(target: logging.Logger, level: str) -> None:
        numeric = getattr(logging, level.upper(), logging.INFO)
        target.setLevel(numeric)
        for handler in target.handlers:
            handler.setLevel(numeric)

    def set_level(self, level: str):
        """Change the threshold for this logger and its handler (``--log-level``)."""
        self._apply_level(self.logger, level)

    def log(
        self,
        level: str,
        message: str,
        extra_fields: Optional[Dict[str, Any]] = None,
        run_id: Optional[str] = None,
        **fields,
    ):
        extra: Dict[str, Any] = {"extra_fields": {**(extra_fields or {}), **fields}}
        if run_id:
            extra["run_id"] = run_id
        self.logger.log(getattr(logging, level.upper()), message, extra=extra)

    def debug(self, message: str, **kwargs):
        self.log("DEBUG", message, **kwargs)

    def info(self, message: str, **kwargs):
        self.log("INFO", message, **kwargs)

    def warning(self, message: str, **kwargs):
        self.log("WARNING", message, **kwargs)

    def error(self, message: str, **kwargs):
        self.log("ERROR", message, **kwargs)


def setup_logger(name: str = SERVICE_NAME, level: Optional[str] = None) -> StructuredLogger:
    """
    Build the toolkit logger from the ISOTOPY_* settings.

    Args:
        name: Logger name
        level: Level override; ISOTOPY_LOG_LEVEL when omitted

    Returns:
        Configured StructuredLogger instance
    """
    settings = get_settings()
    return StructuredLogger(
        name=name,
        level=level or settings.log_level,
        version=settings.app_version,
        enable_json=settings.log_json,
        stream=settings.log_stream,
    )


logger = setup_logger()


def log_sample_event(strategy: str, point_count: int, edge_count: int, seed: int, dropped: int = 0):
    """Log generation of a sample set."""
    logger.info(
        f"Sampled {point_count} points ({strategy}, {dropped} dropped off H)",
        event_type="sample_generation",
        strategy=strategy,
        point_count=point_count,
        edge_count=edge_count,
        seed=seed,
        dropped=dropped,
    )


def log_frame_written(path: str, t: float, row_count: int, max_seam_residual: float):
    logger.debug(
        f"Wrote frame t={t:.6g} ({row_count} rows) to {path}",
        event_type="frame_written",
        path=path,
        t=t,
        row_count=row_count,
        max_seam_residual=max_seam_residual,
    )


def log_check_result(
    name: str,
    passed: bool,
    max_residual: float,
    tolerance: float,
    sample_count: int,
    run_id: Optional[str] = None,
):
    """Failed checks are logged at WARNING, passing ones at INFO."""
    logger.log(
        "INFO" if passed else "WARNING",
        f"Check {name} {'passed' if passed else 'FAILED'} "
        f"(max residual {max_residual:.3e}, tolerance {tolerance:.1e}, n={sample_count})",
        run_id=run_id,
        event_type="verification_check",
        check=name,
        passed=passed,
        max_residual=max_residual,
        tolerance=tolerance,
        sample_count=sample_count,
    )


def log_error_with_context(error_msg: str, context: Optional[Dict[str, Any]] = None, run_id: Optional[str] = None):
    logger.error(error_msg, run_id=run_id, event_type="error", context=context or {})


def log_performance_metric(
    metric_name: str,
    value: float,
    unit: str = "ms",
    tags: Optional[Dict[str, str]] = None,
    run_id: Optional[str] = None,
):
    """Log a timing with structured data."""
    logger.info(
        f"Performance metric: {metric_name} = {value} {unit}",
        run_id=run_id,
        event_type="performance_metric",
        metric_name=metric_name,
        value=value,
        unit=unit,
        tags=tags or {},
    )
