"""JSONL run log for commands, pipeline stages and ensemble cells.

Every command records what it did and with which inputs so that a run
directory can be audited after the fact. Failures are recorded per cell
without aborting sibling work.
"""

from __future__ import annotations

import json
from contextvars import ContextVar
from datetime import datetime, timezone
from pathlib import Path
from typing import Any

from climpanel.utils.logging import get_logger

_run_source: ContextVar[str] = ContextVar("run_source", default="library")
_logger = get_logger("climpanel.runs")


def set_run_source(source: str) -> None:
    """Set the current caller label (e.g. 'cli' or 'pipeline') for this context."""
    _run_source.set(source)


def get_run_source() -> str:
    """Return the current caller label."""
    return _run_source.get()


def log_run(
    action: str,
    details: dict[str, Any],
    *,
    error: str | None = None,
    log_dir: Path | None = None,
) -> None:
    """Append one record to run.jsonl and mirror it to the runs logger.

    Args:
        action: Action name (e.g. 'fit', 'stage:project', 'cell').
        details: Structured details (paths, variant, draw counts). Keep small.
        error: Short error message when the action failed.
        log_dir: Directory for run.jsonl. If None, only the logger is used.
    """
    record: dict[str, Any] = {
        "ts": datetime.now(tz=timezone.utc).isoformat(),
        "source": get_run_source(),
        "action": action,
        "details": details,
    }
    if error is not None:
        record["error"] = error
        _logger.warning("%s failed: %s | %s", action, error, details)
    else:
        _logger.info("%s | %s", action, details)

    if log_dir is None:
        return
    log_dir = Path(log_dir)
    log_dir.mkdir(parents=True, exist_ok=True)
    try:
        with open(log_dir / "run.jsonl", "a") as handle:
            handle.write(json.dumps(record, default=str) + "\n")
    except OSError:
        _logger.warning("Could not append to %s", log_dir / "run.jsonl")
