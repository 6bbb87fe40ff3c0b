"""Specification-selection request and response schemas."""

from __future__ import annotations

from typing import TYPE_CHECKING

from pydantic import BaseModel

if TYPE_CHECKING:
    from climpanel.selection.cross_validation import CvReport


class SelectRequest(BaseModel):
    """Input for cross-validating binned specifications."""

    panel: str
    out_dir: str
    candidates: str | None = None
    base_spec: str | None = None
    split_year: int = 2014
    year_effect: str = "train_mean"


class CandidateRow(BaseModel):
    id: str
    lower_edge: float
    interval: float
    rmse_oot: float
    rmse_oos: float
    oot_skipped: int
    winner: bool


class SelectResponse(BaseModel):
    winner: str
    split_year: int
    candidates: list[CandidateRow]
    runtime_seconds: float
    outputs: dict[str, str] = {}

    @classmethod
    def from_domain(cls, r: CvReport, outputs: dict[str, str] | None = None) -> SelectResponse:
        return cls(
            winner=r.winner.id,
            split_year=r.split_year,
            candidates=[
                CandidateRow(
                    id=s.candidate.id,
                    lower_edge=s.candidate.lower_edge,
                    interval=s.candidate.interval,
                    rmse_oot=s.rmse_oot,
                    rmse_oos=s.rmse_oos,
                    oot_skipped=s.oot_skipped,
                    winner=s.candidate == r.winner,
                )
                for s in r.scores
            ],
            runtime_seconds=r.runtime_seconds,
            outputs=outputs or {},
        )
