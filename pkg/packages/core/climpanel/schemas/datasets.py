"""Validation and synthetic-data schemas."""

from __future__ import annotations

from typing import TYPE_CHECKING

from pydantic import BaseModel, Field

if TYPE_CHECKING:
    from climpanel.validation import ValidationReport


class ValidateRequest(BaseModel):
    """Files to validate; any subset may be given."""

    grid_hourly: str | None = None
    grid_daily: str | None = None
    cell_weights: str | None = None
    population_weights: str | None = None
    panel: str | None = None
    climate_dir: str | None = None
    growth: str | None = None
    shares: str | None = None


class ViolationRow(BaseModel):
    file: str
    line: int | None
    code: str
    message: str


class ValidateResponse(BaseModel):
    ok: bool
    checked: list[str]
    violations: list[ViolationRow]

    @classmethod
    def from_domain(cls, r: ValidationReport) -> ValidateResponse:
        return cls(
            ok=r.ok,
            checked=r.checked,
            violations=[ViolationRow(**v.to_dict()) for v in r.violations],
        )


class SynthRequest(BaseModel):
    """Size and truth of a synthetic fixture set."""

    out: str
    n_provinces: int = Field(default=5, ge=2)
    n_years: int = Field(default=30, ge=2)
    beta1: float = 0.05
    beta2: float = -0.001
    rho: float = 0.0
    fe_scale: float = Field(default=1.0, ge=0)
    noise_sd: float = Field(default=0.5, ge=0)
    seed: int = 0
    n_lags: int = Field(default=0, ge=0, le=5)
    models: list[str] = ["model_a", "model_b"]
    rcps: list[str] = ["rcp45", "rcp85"]


class SynthResponse(BaseModel):
    out: str
    files: dict[str, str]
