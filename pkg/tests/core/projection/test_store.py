"""Tests for the partitioned run store."""

import json
from pathlib import Path

import numpy as np
import pandas as pd
import pytest

from climpanel.errors import NotFoundError
from climpanel.projection.store import RUN_COLUMNS, PartitionKey, RunStore

KEY = PartitionKey("common_nolag", "rcp85", "model_b", "baseline")


def _runs(draws: int = 2) -> pd.DataFrame:
    rows = [
        {
            "province": province,
            "year": year,
            "draw": draw,
            "g_plus": 1.0 + draw,
            "gpp_ratio": 1.0 - 0.01 * (year - 2022),
            "level_with": 1.0,
            "level_without": 1.0,
        }
        for draw in range(draws)
        for province in ("P01", "P00")
        for year in (2023, 2024)
    ]
    return pd.DataFrame(rows)


def test_write_and_read(tmp_path: Path) -> None:
    store = RunStore(tmp_path)
    store.write_partition(KEY, _runs())
    frame = store.read_partition(KEY)
    assert list(frame.columns) == RUN_COLUMNS
    assert len(frame) == 8
    assert set(frame["model"]) == {"model_b"}
    assert set(frame["rcp"]) == {"rcp85"}
    # ordered by draw, province, year
    assert list(frame["province"][:4]) == ["P00", "P00", "P01", "P01"]
    np.testing.assert_allclose(frame["gpp_ratio"][:2], [0.99, 0.98])
    assert store.path_for(KEY) == tmp_path / "common_nolag" / "rcp85" / "model_b" / "baseline.csv"


def test_index_lists_partitions(tmp_path: Path) -> None:
    store = RunStore(tmp_path)
    other = PartitionKey("common_nolag", "rcp45", "model_a", "ssp3")
    store.write_partition(KEY, _runs())
    store.write_partition(other, _runs(draws=1))
    assert store.list_partitions() == [other, KEY]
    index = json.loads(store.index_path.read_text())
    entry = next(p for p in index["partitions"] if p["growth"] == "ssp3")
    assert entry["rows"] == 4
    assert entry["path"] == "common_nolag/rcp45/model_a/ssp3.csv"


def test_rewrite_replaces_partition(tmp_path: Path) -> None:
    store = RunStore(tmp_path)
    store.write_partition(KEY, _runs(draws=3))
    store.write_partition(KEY, _runs(draws=1))
    assert len(store.read_partition(KEY)) == 4
    assert len(store.list_partitions()) == 1


def test_streamed_chunks(tmp_path: Path) -> None:
    store = RunStore(tmp_path)
    runs = _runs()
    with store.partition_writer(KEY) as writer:
        for _, chunk in runs.groupby("draw"):
            writer.write(chunk)
    assert writer.rows == 8
    assert len(store.read_partition(KEY)) == 8


def test_failed_write_leaves_nothing(tmp_path: Path) -> None:
    store = RunStore(tmp_path)
    with pytest.raises(RuntimeError):
        with store.partition_writer(KEY) as writer:
            writer.write(_runs())
            raise RuntimeError("boom")
    assert not store.path_for(KEY).exists()
    assert list(store.path_for(KEY).parent.iterdir()) == []
    assert store.list_partitions() == []


def test_empty_partition_has_header(tmp_path: Path) -> None:
    store = RunStore(tmp_path)
    with store.partition_writer(KEY):
        pass
    assert store.read_partition(KEY).empty
    assert list(store.read_partition(KEY).columns) == RUN_COLUMNS


def test_missing_store(tmp_path: Path) -> None:
    store = RunStore(tmp_path / "runs")
    assert store.list_partitions() == []
    with pytest.raises(NotFoundError):
        store.require()
    with pytest.raises(NotFoundError):
        store.read_partition(KEY)
