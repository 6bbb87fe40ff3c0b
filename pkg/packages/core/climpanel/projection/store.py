"""Partitioned CSV store of projection runs.

Layout: ``<root>/<variant>/<rcp>/<model>/<growth>.csv`` plus ``index.json``
listing every partition. Rows within a partition are ordered by
(draw, province, year). Partitions are written through a temp file and
renamed on completion.
"""

from __future__ import annotations

import json
import os
import tempfile
from collections.abc import Iterator
from contextlib import contextmanager
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import IO

import pandas as pd

from climpanel.errors import NotFoundError
from climpanel.utils.io import write_json

RUN_COLUMNS = [
    "province",
    "year",
    "model",
    "rcp",
    "growth",
    "draw",
    "g_plus",
    "gpp_ratio",
    "level_with",
    "level_without",
]
FLOAT_FORMAT = "%.12g"


@dataclass(frozen=True, order=True)
class PartitionKey:
    variant: str
    rcp: str
    model: str
    growth: str

    def relative_path(self) -> Path:
        return Path(self.variant) / self.rcp / self.model / f"{self.growth}.csv"


class PartitionWriter:
    """Appends run chunks to one partition file."""

    def __init__(self, handle: IO[str], key: PartitionKey) -> None:
        self._handle = handle
        self._key = key
        self.rows = 0

    def write(self, frame: pd.DataFrame) -> None:
        chunk = frame.assign(model=self._key.model, rcp=self._key.rcp, growth=self._key.growth)
        chunk[RUN_COLUMNS].to_csv(
            self._handle,
            index=False,
            header=self.rows == 0,
            float_format=FLOAT_FORMAT,
            lineterminator="\n",
        )
        self.rows += len(chunk)


class RunStore:
    """Projection runs on disk, one CSV per (variant, rcp, model, growth)."""

    def __init__(self, root: Path) -> None:
        self.root = Path(root)

    @property
    def index_path(self) -> Path:
        return self.root / "index.json"

    def path_for(self, key: PartitionKey) -> Path:
        return self.root / key.relative_path()

    @contextmanager
    def partition_writer(self, key: PartitionKey) -> Iterator[PartitionWriter]:
        path = self.path_for(key)
        path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp_name = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent)
        try:
            with os.fdopen(fd, "w", newline="") as handle:
                writer = PartitionWriter(handle, key)
                yield writer
                if writer.rows == 0:
                    handle.write(",".join(RUN_COLUMNS) + "\n")
            os.replace(tmp_name, path)
        except BaseException:
            Path(tmp_name).unlink(missing_ok=True)
            raise
        self._update_index(key, writer.rows)

    def write_partition(self, key: PartitionKey, frame: pd.DataFrame) -> None:
        ordered = frame.sort_values(["draw", "province", "year"], kind="stable")
        with self.partition_writer(key) as writer:
            writer.write(ordered)

    def read_partition(self, key: PartitionKey) -> pd.DataFrame:
        path = self.path_for(key)
        if not path.exists():
            raise NotFoundError(f"Run partition not found: {path}", details={"path": str(path)})
        return pd.read_csv(path, dtype={"province": str, "model": str, "rcp": str, "growth": str})

    def list_partitions(self) -> list[PartitionKey]:
        if not self.index_path.exists():
            return []
        with open(self.index_path) as f:
            index = json.load(f)
        return sorted(
            PartitionKey(p["variant"], p["rcp"], p["model"], p["growth"]) for p in index.get("partitions", [])
        )

    def iter_partitions(self) -> Iterator[tuple[PartitionKey, pd.DataFrame]]:
        for key in self.list_partitions():
            yield key, self.read_partition(key)

    def require(self) -> None:
        if not self.index_path.exists():
            raise NotFoundError(
                f"No run store at {self.root}",
                details={"path": str(self.root)},
                suggestion="Run 'climpanel project' first",
            )

    def _update_index(self, key: PartitionKey, rows: int) -> None:
        entries = {}
        if self.index_path.exists():
            with open(self.index_path) as f:
                for entry in json.load(f).get("partitions", []):
                    entries[(entry["variant"], entry["rcp"], entry["model"], entry["growth"])] = entry
        entry = asdict(key)
        entry["path"] = key.relative_path().as_posix()
        entry["rows"] = rows
        entries[(key.variant, key.rcp, key.model, key.growth)] = entry
        write_json({"partitions": [entries[k] for k in sorted(entries)]}, self.index_path)
