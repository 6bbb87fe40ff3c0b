"""Tests for logging setup."""

import io
import logging
from pathlib import Path

from climpanel.utils.logging import get_logger, setup_logging


def test_console_and_files(tmp_path: Path) -> None:
    stream = io.StringIO()
    setup_logging(log_dir=tmp_path, level=logging.INFO, console_stream=stream)
    get_logger("climpanel.estimation").info("absorbed in %d sweeps", 4)
    get_logger("climpanel.runs").info("cell rcp45/model_a")
    for handler in logging.getLogger("climpanel").handlers + logging.getLogger("climpanel.runs").handlers:
        handler.flush()

    assert "absorbed in 4 sweeps" in stream.getvalue()
    assert "climpanel.estimation" in (tmp_path / "climpanel.log").read_text()
    runs = (tmp_path / "runs.log").read_text()
    assert "cell rcp45/model_a" in runs
    assert "absorbed" not in runs


def test_repeated_setup_does_not_duplicate(tmp_path: Path) -> None:
    stream = io.StringIO()
    setup_logging(log_dir=None, console_stream=stream)
    setup_logging(log_dir=None, console_stream=stream)
    get_logger("climpanel").warning("once")
    assert stream.getvalue().count("once") == 1
    assert logging.getLogger("climpanel.runs").handlers == []


def test_level_filters_console() -> None:
    stream = io.StringIO()
    setup_logging(level=logging.WARNING, console_stream=stream)
    get_logger("climpanel.projection").info("hidden")
    get_logger("climpanel.projection").warning("shown")
    assert "hidden" not in stream.getvalue()
    assert "shown" in stream.getvalue()
