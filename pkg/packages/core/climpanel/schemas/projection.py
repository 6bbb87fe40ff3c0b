"""Projection request and response schemas."""

from __future__ import annotations

from typing import TYPE_CHECKING

from pydantic import BaseModel, Field

if TYPE_CHECKING:
    from climpanel.projection.ensemble import EnsembleResult


class ProjectRequest(BaseModel):
    """Input for projecting the ensemble into a run store.

    ``seed`` has no default: projections are only reproducible with one.
    """

    panel: str
    climate_dir: str
    out: str
    seed: int
    specs: list[str] = []
    variants: list[str] = []
    rcps: list[str] | None = None
    growth: str | None = None
    growth_kinds: list[str] = ["baseline"]
    shares: str | None = None
    draws: int | None = Field(default=None, ge=0)
    bias_correct: bool = False
    regime_switching: bool = False
    start_year: int | None = None
    end_year: int | None = None
    initial_levels: str | None = None


class ProjectResponse(BaseModel):
    out: str
    partitions: list[str]
    rows: int
    draws: int
    redraws: dict[str, int]
    runtime_seconds: float

    @classmethod
    def from_domain(cls, r: EnsembleResult, out: str, draws: int) -> ProjectResponse:
        return cls(
            out=out,
            partitions=[str(key.relative_path()) for key in r.partitions],
            rows=r.rows,
            draws=draws,
            redraws=r.redraws,
            runtime_seconds=r.runtime_seconds,
        )
