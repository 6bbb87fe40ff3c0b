"""Pipeline run configuration and response schemas."""

from __future__ import annotations

from pathlib import Path
from typing import Any

import pydantic
import yaml
from pydantic import BaseModel, ConfigDict, Field

from climpanel.errors import ConfigurationError, NotFoundError

# Fields holding input paths; optional ones may be null
INPUT_FIELDS = (
    "grid_hourly",
    "grid_daily",
    "cell_weights",
    "population_weights",
    "panel",
    "climate_dir",
    "growth",
    "shares",
    "spec",
    "candidates",
)


class RunConfig(BaseModel):
    """A pipeline.yaml file. Relative paths are relative to the file itself."""

    model_config = ConfigDict(extra="forbid")

    grid_hourly: Path
    grid_daily: Path | None = None
    cell_weights: Path
    population_weights: Path
    panel: Path
    climate_dir: Path
    growth: Path | None = None
    shares: Path
    spec: Path | None = None
    variants: list[str] = []
    candidates: Path | None = None
    select_spec: bool = False
    seed: int
    draws: int = Field(default=1000, ge=0)
    rcps: list[str] | None = None
    growth_kinds: list[str] = ["baseline"]
    bias_correct: bool = False
    regime_switching: bool = False
    start_year: int | None = None
    end_year: int | None = None
    out_dir: Path = Path("out")
    synthetic: dict[str, Any] | None = None

    def resolve(self, base: Path) -> RunConfig:
        updates: dict[str, Path] = {}
        for name in (*INPUT_FIELDS, "out_dir"):
            value = getattr(self, name)
            if value is not None and not value.is_absolute():
                updates[name] = base / value
        return self.model_copy(update=updates)

    def input_paths(self) -> dict[str, Path]:
        return {name: getattr(self, name) for name in INPUT_FIELDS if getattr(self, name) is not None}

    def check_paths(self) -> None:
        """Raise ConfigurationError naming every referenced path that does not exist."""
        missing = {name: str(path) for name, path in self.input_paths().items() if not path.exists()}
        if missing:
            raise ConfigurationError(
                f"Pipeline config references missing paths: {sorted(missing)}",
                details={"missing": missing},
                suggestion="Fix the paths in the pipeline config or run 'climpanel synth'",
            )


def load_run_config(path: Path) -> RunConfig:
    """Read, validate and resolve a pipeline.yaml.

    Raises:
        NotFoundError: If the file does not exist.
        ConfigurationError: If the file is malformed or references missing paths.
    """
    path = Path(path)
    if not path.is_file():
        raise NotFoundError(f"Pipeline config not found: {path}", details={"path": str(path)})
    with open(path) as f:
        data = yaml.safe_load(f) or {}
    try:
        config = RunConfig.model_validate(data)
    except pydantic.ValidationError as e:
        raise ConfigurationError(
            f"Invalid pipeline config {path}: {e.error_count()} errors",
            details={"errors": [f"{'.'.join(map(str, err['loc']))}: {err['msg']}" for err in e.errors()]},
        ) from e
    config = config.resolve(path.parent.resolve())
    config.check_paths()
    return config


class PipelineRequest(BaseModel):
    config: str


class StageRow(BaseModel):
    name: str
    runtime_seconds: float
    outputs: dict[str, str] = {}


class PipelineResponse(BaseModel):
    out_dir: str
    stages: list[StageRow]
    manifest: str
    summary: str
