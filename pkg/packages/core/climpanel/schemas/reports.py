"""Report request and response schemas."""

from __future__ import annotations

from pydantic import BaseModel


class ReportRequest(BaseModel):
    """Input for summarizing a run store; ``out`` is the summary.csv path."""

    runs: str
    shares: str
    out: str
    scopes: list[str] = ["gdp", "grp", "gpp"]
    years: list[int] | None = None
    include_point: bool = False


class ReportResponse(BaseModel):
    out: str
    files: list[str]
    rows: int
    scenarios: list[str]
