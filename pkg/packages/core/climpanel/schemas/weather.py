"""Aggregate request and response schemas."""

from __future__ import annotations

from pydantic import BaseModel, model_validator


class AggregateRequest(BaseModel):
    """Input for aggregating a weather grid to province-year regressors."""

    grid_hourly: str
    grid_daily: str | None = None
    cell_weights: str
    population_weights: str
    out: str
    provinces: list[str] | None = None
    start_year: int | None = None
    end_year: int | None = None
    panel: str | None = None
    panel_out: str | None = None

    @model_validator(mode="after")
    def _check_years(self) -> AggregateRequest:
        if (self.start_year is None) != (self.end_year is None):
            raise ValueError("start_year and end_year must be given together")
        if self.start_year is not None and self.end_year is not None and self.end_year < self.start_year:
            raise ValueError("end_year precedes start_year")
        return self


class AggregateResponse(BaseModel):
    out: str
    rows: int
    columns: int
    provinces: int
    years: list[int]
    panel_out: str | None = None
