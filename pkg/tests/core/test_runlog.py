"""Tests for the JSONL run log and the atomic file helpers."""

import json
from pathlib import Path

import pandas as pd
import pytest

from climpanel.errors import NotFoundError, ValidationError
from climpanel.runlog import get_run_source, log_run, set_run_source
from climpanel.utils.io import atomic_write, read_csv, sha256_tree, write_csv


def test_set_and_get_run_source() -> None:
    set_run_source("cli")
    assert get_run_source() == "cli"
    set_run_source("pipeline")
    assert get_run_source() == "pipeline"


def test_log_run_no_write_when_log_dir_none(tmp_path: Path) -> None:
    log_run("fit", {"n": 1}, log_dir=None)
    assert not (tmp_path / "run.jsonl").exists()


def test_log_run_appends(tmp_path: Path) -> None:
    set_run_source("cli")
    log_run("fit", {"spec": "baseline"}, log_dir=tmp_path)
    log_run("cell", {"rcp": "rcp45"}, error="collapse", log_dir=tmp_path)
    lines = (tmp_path / "run.jsonl").read_text().strip().split("\n")
    assert len(lines) == 2
    first, second = (json.loads(line) for line in lines)
    assert first["source"] == "cli"
    assert first["details"] == {"spec": "baseline"}
    assert "error" not in first
    assert second["error"] == "collapse"
    assert "ts" in second


def test_atomic_write_leaves_no_partial_file(tmp_path: Path) -> None:
    path = tmp_path / "out" / "table.csv"

    def fail(handle: object) -> None:
        raise RuntimeError("disk full")

    with pytest.raises(RuntimeError):
        atomic_write(path, fail)
    assert not path.exists()
    assert list(path.parent.iterdir()) == []


def test_read_csv_checks_header(tmp_path: Path) -> None:
    write_csv(pd.DataFrame({"a": [1.0], "b": [2.0]}), tmp_path / "t.csv")
    assert read_csv(tmp_path / "t.csv", ["a"], "Test").shape == (1, 2)
    with pytest.raises(ValidationError) as exc_info:
        read_csv(tmp_path / "t.csv", ["a", "c"], "Test")
    assert exc_info.value.details["missing"] == ["c"]
    with pytest.raises(NotFoundError):
        read_csv(tmp_path / "none.csv", ["a"], "Test")


def test_sha256_tree_is_stable(tmp_path: Path) -> None:
    (tmp_path / "d").mkdir()
    (tmp_path / "d" / "b.txt").write_text("b")
    (tmp_path / "d" / "a.txt").write_text("a")
    digests = sha256_tree(tmp_path / "d")
    assert list(digests) == [str(tmp_path / "d" / "a.txt"), str(tmp_path / "d" / "b.txt")]
    assert digests == sha256_tree(tmp_path / "d")
    assert len(sha256_tree(tmp_path / "d" / "a.txt")) == 1
