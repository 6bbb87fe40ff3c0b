"""Logging configuration for climpanel.

Everything logs under the ``climpanel`` logger. The console handler writes
to stderr so that ``--json`` output on stdout stays parseable. With a log
directory, full records go to ``climpanel.log`` and the one-line summaries
of ensemble cells and pipeline stages (``climpanel.runs``) to ``runs.log``.
"""

import logging
import sys
from pathlib import Path
from typing import TextIO

ROOT_LOGGER = "climpanel"
RUNS_LOGGER = "climpanel.runs"

DATE_FORMAT = "%Y-%m-%d %H:%M:%S"
CONSOLE_FORMAT = "%(asctime)s | %(levelname)-8s | %(message)s"
FILE_FORMAT = "%(asctime)s | %(levelname)-8s | %(name)s | %(message)s"
RUNS_FORMAT = "%(asctime)s | %(message)s"


def _handler(handler: logging.Handler, level: int, fmt: str) -> logging.Handler:
    handler.setLevel(level)
    handler.setFormatter(logging.Formatter(fmt, datefmt=DATE_FORMAT))
    return handler


def setup_logging(
    log_dir: Path | None = None,
    level: int = logging.INFO,
    log_to_file: bool = True,
    console_stream: TextIO | None = None,
) -> logging.Logger:
    """Configure the climpanel loggers; safe to call more than once.

    Args:
        log_dir: Directory for climpanel.log and runs.log. If None, only console logging.
        level: Level for the console and climpanel.log.
        log_to_file: Whether to write files when ``log_dir`` is given.
        console_stream: Stream for console records. Defaults to sys.stderr.

    Returns:
        The ``climpanel`` logger.
    """
    logger = logging.getLogger(ROOT_LOGGER)
    logger.setLevel(level)
    logger.handlers.clear()
    logger.addHandler(_handler(logging.StreamHandler(console_stream or sys.stderr), level, CONSOLE_FORMAT))

    runs_logger = logging.getLogger(RUNS_LOGGER)
    runs_logger.handlers.clear()
    runs_logger.setLevel(logging.INFO)

    if log_to_file and log_dir:
        log_dir.mkdir(parents=True, exist_ok=True)
        logger.addHandler(_handler(logging.FileHandler(log_dir / "climpanel.log"), level, FILE_FORMAT))
        runs_logger.addHandler(_handler(logging.FileHandler(log_dir / "runs.log"), logging.INFO, RUNS_FORMAT))

    # numpy and pandas RuntimeWarnings (overflow, empty means) land in the same files
    logging.captureWarnings(True)
    warnings_logger = logging.getLogger("py.warnings")
    warnings_logger.handlers = list(logger.handlers)
    warnings_logger.propagate = False

    return logger


def get_logger(name: str = ROOT_LOGGER) -> logging.Logger:
    """Logger for one area, e.g. ``get_logger("climpanel.projection")``."""
    return logging.getLogger(name)
