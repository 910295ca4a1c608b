"""
Paragraded Logging Setup
========================

Centralized logging configuration for the library and the CLI.
"""

import json
import logging
import os
import sys
from datetime import datetime, timezone
from typing import Any, Dict, Optional

import numpy as np

_RESERVED = frozenset(
    (
        "name", "msg", "args", "levelname", "levelno", "pathname", "filename",
        "module", "lineno", "funcName", "created", "msecs", "relativeCreated",
        "thread", "threadName", "processName", "process", "getMessage", "exc_info",
        "exc_text", "stack_info", "taskName",
    )
)

_MAX_LOGGED_ARRAY = 32


class JSONFormatter(logging.Formatter):
    """JSON formatter for structured logging."""

    def format(self, record: logging.LogRecord) -> str:
        """Format log record as JSON."""
        log_obj: Dict[str, Any] = {
            "timestamp": datetime.now(timezone.utc).isoformat().replace("+00:00", "Z"),
            "level": record.levelname,
            "logger": record.name,
            "message": record.getMessage(),
            "module": record.module,
            "function": record.funcName,
            "line": record.lineno,
        }

        if record.exc_info:
            log_obj["exception"] = self.formatException(record.exc_info)

        # extra= fields
        for key, value in record.__dict__.items():
            if key not in _RESERVED:
                log_obj[key] = value

        return json.dumps(log_obj, default=str)


def setup_logger(name: Optional[str] = None) -> logging.Logger:
    """
    Setup logger with appropriate configuration.

    Args:
        name: Logger name (defaults to the root of the package)

    Returns:
        Configured logger instance
    """
    log_level = os.getenv("LOG_LEVEL", "WARNING").upper()

    logger = logging.getLogger(name or "paragraded")

    # Avoid duplicate handlers
    if logger.handlers:
        return logger

    logger.setLevel(getattr(logging, log_level, logging.WARNING))

    handler = logging.StreamHandler(sys.stderr)
    handler.setLevel(logger.level)

    if os.getenv("PARAGRADED_LOG_FORMAT", "text").lower() == "json":
        formatter: logging.Formatter = JSONFormatter()
    else:
        formatter = logging.Formatter(
            "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
        )

    handler.setFormatter(formatter)
    logger.addHandler(handler)
    logger.propagate = False

    return logger


def log_run_summary(
    logger: logging.Logger,
    run_id: str,
    params: Dict[str, Any],
    result: Optional[Dict[str, Any]] = None,
    error: Optional[Exception] = None,
) -> None:
    """
    Log one structured line describing a CLI run.

    Args:
        logger: Logger instance
        run_id: Run identifier
        params: Resolved parameters (large arrays are dropped)
        result: Result summary (optional)
        error: Error information (optional)
    """
    entry: Dict[str, Any] = {"run_id": run_id, "params": _sanitize_log_data(params)}

    if result:
        entry["result"] = _sanitize_log_data(result)

    if error:
        entry["error"] = {"type": type(error).__name__, "message": str(error)}
        logger.error("Run failed", extra=entry)
    else:
        logger.info("Run completed", extra=entry)


def _sanitize_log_data(data: Dict[str, Any]) -> Dict[str, Any]:
    """
    Drop bulky array payloads so a log line stays one line.

    Args:
        data: Data to sanitize

    Returns:
        Sanitized data
    """
    sanitized: Dict[str, Any] = {}
    for key, value in data.items():
        if isinstance(value, np.ndarray):
            if value.size > _MAX_LOGGED_ARRAY:
                sanitized[key] = f"<array shape={value.shape}>"
            else:
                sanitized[key] = value.tolist()
        elif isinstance(value, dict):
            sanitized[key] = _sanitize_log_data(value)
        elif isinstance(value, (list, tuple)) and len(value) > _MAX_LOGGED_ARRAY:
            sanitized[key] = f"<sequence len={len(value)}>"
        else:
            sanitized[key] = value
    return sanitized
