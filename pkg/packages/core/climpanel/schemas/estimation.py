"""Fit request and response schemas."""

from __future__ import annotations

from typing import TYPE_CHECKING, Any

from pydantic import BaseModel, Field

if TYPE_CHECKING:
    from climpanel.estimation.fit import FitResult


class FitRequest(BaseModel):
    """Input for fitting one model specification on a panel."""

    panel: str
    out_dir: str
    spec: str | None = None
    variant: str | None = None
    reference: float = 26.0
    curve_step: float = Field(default=1.0, gt=0)


class CoefficientRow(BaseModel):
    name: str
    estimate: float
    std_err: float


class FitResponse(BaseModel):
    """Summary of a fitted model and the files written for it."""

    spec: str
    form: str
    n_obs: int
    r2: float
    within_r2: float
    cluster_count: int
    coefficients: list[CoefficientRow]
    outputs: dict[str, str] = {}

    @classmethod
    def from_domain(cls, r: FitResult, outputs: dict[str, Any] | None = None) -> FitResponse:
        se = r.std_errors
        return cls(
            spec=r.spec.name,
            form=r.spec.form.value,
            n_obs=r.n_obs,
            r2=r.r2,
            within_r2=r.within_r2,
            cluster_count=r.cluster_count,
            coefficients=[
                CoefficientRow(name=name, estimate=float(value), std_err=float(se[name]))
                for name, value in r.params.items()
            ],
            outputs={k: str(v) for k, v in (outputs or {}).items()},
        )
