"""Centralized path resolution for climpanel.

Handles data and log directories for both development and installed environments.
Uses XDG Base Directory spec on Linux, standard locations elsewhere.
"""

from __future__ import annotations

import os
import platform
from pathlib import Path


def _find_repo_root() -> Path | None:
    """Walk up from this file to find the monorepo root (contains .git)."""
    current = Path(__file__).resolve().parent
    for _ in range(10):
        if (current / ".git").exists():
            return current
        parent = current.parent
        if parent == current:
            break
        current = parent
    return None


def _user_dir(kind: str) -> Path:
    """Per-user directory for 'data' or 'logs'."""
    system = platform.system()
    if system == "Linux":
        env_var, fallback = {
            "data": ("XDG_DATA_HOME", Path.home() / ".local" / "share"),
            "logs": ("XDG_STATE_HOME", Path.home() / ".local" / "state"),
        }[kind]
        base = os.getenv(env_var)
        return (Path(base) if base else fallback) / "climpanel"
    appdata = os.getenv("APPDATA") if system == "Windows" else None
    if appdata:
        return Path(appdata) / "climpanel" / kind
    return Path.home() / ".climpanel" / kind


def get_data_dir(custom_path: Path | None = None) -> Path:
    """Get the data directory path.

    Priority:
    1. Custom path if provided
    2. CLIMPANEL_DATA_DIR environment variable
    3. Development mode: repo root / data (if exists)
    4. Installed mode: XDG_DATA_HOME/climpanel on Linux, ~/.climpanel/data elsewhere
    """
    if custom_path is None and os.getenv("CLIMPANEL_DATA_DIR"):
        custom_path = Path(os.environ["CLIMPANEL_DATA_DIR"])
    if custom_path:
        data_dir = Path(custom_path)
        data_dir.mkdir(parents=True, exist_ok=True)
        return data_dir

    repo_root = _find_repo_root()
    if repo_root and (repo_root / "data").exists():
        return repo_root / "data"

    data_dir = _user_dir("data")
    data_dir.mkdir(parents=True, exist_ok=True)
    return data_dir


def get_log_dir(custom_path: Path | None = None) -> Path:
    """Get the log directory path.

    Priority:
    1. Custom path if provided
    2. CLIMPANEL_LOG_DIR environment variable
    3. Development mode: repo root / logs (if exists)
    4. Installed mode: XDG_STATE_HOME/climpanel on Linux, ~/.climpanel/logs elsewhere
    """
    if custom_path is None and os.getenv("CLIMPANEL_LOG_DIR"):
        custom_path = Path(os.environ["CLIMPANEL_LOG_DIR"])
    if custom_path:
        log_dir = Path(custom_path)
        log_dir.mkdir(parents=True, exist_ok=True)
        return log_dir

    repo_root = _find_repo_root()
    if repo_root and (repo_root / "logs").exists():
        return repo_root / "logs"

    log_dir = _user_dir("logs")
    log_dir.mkdir(parents=True, exist_ok=True)
    return log_dir


def get_project_root() -> Path:
    """Get the monorepo root directory.

    Walks up from this file looking for .git directory.
    """
    repo_root = _find_repo_root()
    if repo_root:
        return repo_root
    return Path(__file__).resolve().parent.parent.parent.parent.parent
