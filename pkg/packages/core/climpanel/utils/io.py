"""File helpers shared by every command that writes output."""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from collections.abc import Callable
from pathlib import Path
from typing import IO, Any

import pandas as pd

from climpanel.errors import NotFoundError, ValidationError


def atomic_write(path: Path, writer: Callable[[IO[str]], None]) -> None:
    """Write a text file via a temp file in the same directory, then rename."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent)
    try:
        with os.fdopen(fd, "w", newline="") as handle:
            writer(handle)
        os.replace(tmp_name, path)
    except BaseException:
        Path(tmp_name).unlink(missing_ok=True)
        raise


def write_csv(frame: pd.DataFrame, path: Path, float_format: str = "%.12g") -> None:
    """Write a DataFrame as CSV atomically, without the index."""
    atomic_write(
        path,
        lambda handle: frame.to_csv(handle, index=False, float_format=float_format, lineterminator="\n"),
    )


def write_json(data: Any, path: Path) -> None:
    """Write JSON atomically with stable key order."""
    atomic_write(path, lambda handle: json.dump(data, handle, indent=2, sort_keys=True, default=str))


def read_csv(path: Path, required: list[str], label: str) -> pd.DataFrame:
    """Read a CSV and check its header.

    Raises:
        NotFoundError: If the file does not exist.
        ValidationError: If required columns are missing.
    """
    path = Path(path)
    if not path.exists():
        raise NotFoundError(
            f"{label} file not found: {path}",
            details={"path": str(path)},
            suggestion="Check the path or run 'climpanel synth' to create fixtures",
        )
    frame = pd.read_csv(path)
    missing = [col for col in required if col not in frame.columns]
    if missing:
        raise ValidationError(
            f"{label} file {path} is missing columns: {missing}",
            details={"path": str(path), "missing": missing, "line": 1},
            suggestion=f"Expected header containing: {','.join(required)}",
        )
    return frame


def sha256_file(path: Path) -> str:
    """SHA-256 hex digest of a file."""
    digest = hashlib.sha256()
    with open(path, "rb") as handle:
        for chunk in iter(lambda: handle.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()


def sha256_tree(path: Path) -> dict[str, str]:
    """Digest every file under a path (or the path itself when it is a file)."""
    path = Path(path)
    if path.is_file():
        return {str(path): sha256_file(path)}
    return {
        str(item): sha256_file(item)
        for item in sorted(path.rglob("*"))
        if item.is_file()
    }
