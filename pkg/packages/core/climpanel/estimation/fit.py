"""Fixed-effects OLS fits and their stored results."""

from __future__ import annotations

import json
from collections.abc import Mapping
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np
import pandas as pd

from climpanel.errors import (
    CollinearDesignError,
    DegenerateClusteringError,
    NotFoundError,
    ValidationError,
)
from climpanel.estimation.absorb import absorb_fixed_effects, recover_fixed_effects
from climpanel.estimation.covariance import cluster_robust_vcov
from climpanel.estimation.design import Design, build_design
from climpanel.estimation.panel import LOW_INCOME_COLUMN, PanelDataset
from climpanel.estimation.spec import ModelSpec
from climpanel.utils.config import EstimationDefaults
from climpanel.utils.io import write_json
from climpanel.utils.logging import get_logger

logger = get_logger("climpanel.estimation")


@dataclass(frozen=True, eq=False)
class FitResult:
    """Estimated coefficients with province-clustered covariance.

    ``coef_names`` follow the design column order. ``fixed_effects`` maps
    each absorbed factor to its group effects; ``province_means`` holds the
    province averages used by the interacted-average form.
    """

    spec: ModelSpec
    coef_names: tuple[str, ...]
    coefficients: np.ndarray
    vcov: np.ndarray
    n_obs: int
    r2: float
    within_r2: float
    cluster_count: int
    residuals: pd.Series | None = None
    fixed_effects: dict[str, dict[str, float]] = field(default_factory=dict)
    province_means: dict[str, dict[str, float]] = field(default_factory=dict)

    def _index(self, name: str) -> int:
        try:
            return self.coef_names.index(name)
        except ValueError:
            raise ValidationError(
                f"Fit has no coefficient {name!r}",
                details={"available": list(self.coef_names)},
            ) from None

    def coef(self, name: str) -> float:
        return float(self.coefficients[self._index(name)])

    def se(self, name: str) -> float:
        i = self._index(name)
        return float(np.sqrt(max(self.vcov[i, i], 0.0)))

    @property
    def params(self) -> pd.Series:
        return pd.Series(self.coefficients, index=list(self.coef_names), name="coef")

    @property
    def std_errors(self) -> pd.Series:
        return pd.Series(np.sqrt(np.clip(np.diag(self.vcov), 0.0, None)), index=list(self.coef_names))

    def with_coefficients(self, coefficients: np.ndarray) -> FitResult:
        """Same fit with another coefficient vector (a bootstrap draw)."""
        return FitResult(
            spec=self.spec,
            coef_names=self.coef_names,
            coefficients=np.asarray(coefficients, dtype=float),
            vcov=self.vcov,
            n_obs=self.n_obs,
            r2=self.r2,
            within_r2=self.within_r2,
            cluster_count=self.cluster_count,
            province_means=self.province_means,
        )

    def coefficient_table(self) -> pd.DataFrame:
        se = self.std_errors
        with np.errstate(divide="ignore", invalid="ignore"):
            t = self.params / se
        return pd.DataFrame({"coef": self.params, "std_err": se, "t_stat": t})

    @classmethod
    def from_coefficients(
        cls,
        spec: ModelSpec,
        coefficients: Mapping[str, float],
        vcov: np.ndarray | None = None,
    ) -> FitResult:
        """Build a fit from stored coefficients; the covariance defaults to zero."""
        names = tuple(coefficients)
        k = len(names)
        matrix = np.zeros((k, k)) if vcov is None else np.asarray(vcov, dtype=float)
        if matrix.shape != (k, k):
            raise ValidationError(f"vcov must be {k}x{k}, got {matrix.shape}")
        return cls(
            spec=spec,
            coef_names=names,
            coefficients=np.array([float(coefficients[n]) for n in names]),
            vcov=matrix,
            n_obs=0,
            r2=float("nan"),
            within_r2=float("nan"),
            cluster_count=0,
        )

    def to_dict(self) -> dict[str, Any]:
        """Serialize to dict for fit.json."""
        return {
            "spec": self.spec.to_dict(),
            "coefficients": {n: float(b) for n, b in zip(self.coef_names, self.coefficients)},
            "coef_names": list(self.coef_names),
            "vcov": self.vcov.tolist(),
            "n_obs": self.n_obs,
            "r2": self.r2,
            "within_r2": self.within_r2,
            "cluster_count": self.cluster_count,
            "fixed_effects": self.fixed_effects,
            "province_means": self.province_means,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> FitResult:
        names = tuple(data["coef_names"])
        return cls(
            spec=ModelSpec.from_dict(data["spec"]),
            coef_names=names,
            coefficients=np.array([float(data["coefficients"][n]) for n in names]),
            vcov=np.asarray(data["vcov"], dtype=float).reshape(len(names), len(names)),
            n_obs=int(data["n_obs"]),
            r2=float(data["r2"]),
            within_r2=float(data["within_r2"]),
            cluster_count=int(data["cluster_count"]),
            fixed_effects=data.get("fixed_effects", {}),
            province_means=data.get("province_means", {}),
        )


def save_fit(result: FitResult, path: Path) -> None:
    write_json(result.to_dict(), Path(path))


def load_fit(path: Path) -> FitResult:
    path = Path(path)
    if not path.exists():
        raise NotFoundError(f"Fit file not found: {path}", details={"path": str(path)})
    with open(path) as f:
        return FitResult.from_dict(json.load(f))


# =============================================================================
# Estimation
# =============================================================================


def collinear_columns(X: np.ndarray, rank_tol: float) -> list[int]:
    """Indices of columns that add no rank given the columns before them."""
    kept: list[int] = []
    offending: list[int] = []
    for j in range(X.shape[1]):
        s = np.linalg.svd(X[:, kept + [j]], compute_uv=False)
        if s[-1] <= rank_tol * s[0] or s[0] == 0.0:
            offending.append(j)
        else:
            kept.append(j)
    return offending


def _equilibrate(X: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    norms = np.sqrt((X**2).sum(axis=0))
    norms = np.where(norms > 0, norms, 1.0)
    return X / norms, norms


def _check_rank(Xs: np.ndarray, columns: list[str], rank_tol: float, absorbed: np.ndarray) -> None:
    """Raise unless the equilibrated design has full column rank and no absorbed columns."""
    s = np.linalg.svd(Xs, compute_uv=False)
    if not absorbed.any() and s.size and s[-1] > rank_tol * s[0]:
        return
    kept = np.flatnonzero(~absorbed)
    offending = [columns[j] for j in np.flatnonzero(absorbed)]
    offending += [columns[kept[j]] for j in collinear_columns(Xs[:, kept], rank_tol)]
    raise CollinearDesignError(
        f"Design is rank deficient after absorbing fixed effects: {offending}",
        details={"columns": offending, "condition": float(s[0] / s[-1]) if s[-1] > 0 else None},
        suggestion="Drop the named columns or change the fixed effects",
    )


def fit_design(
    design: Design,
    defaults: EstimationDefaults | None = None,
    compute_vcov: bool = True,
    recover_effects: bool = True,
) -> FitResult:
    """OLS on the fixed-effect-demeaned design.

    Raises:
        CollinearDesignError: If the demeaned design is not full column rank.
        ConvergenceFailure: If absorption does not converge.
        DegenerateClusteringError: If the covariance has fewer than two clusters.
    """
    defaults = defaults or EstimationDefaults()
    if design.X.shape[1] == 0:
        raise ValidationError("Design has no regressors")
    factors = design.factor_codes()
    system = absorb_fixed_effects(
        design.X, design.y, factors, tol=defaults.absorb_tol, max_sweeps=defaults.max_sweeps
    )
    Xs, norms = _equilibrate(system.X)
    # columns the fixed effects remove entirely keep only rounding residue
    demeaned_norms = np.sqrt((system.X**2).sum(axis=0))
    absorbed = demeaned_norms <= defaults.rank_tol * np.sqrt((design.X**2).sum(axis=0))
    _check_rank(Xs, design.columns, defaults.rank_tol, absorbed)

    scaled_beta, *_ = np.linalg.lstsq(Xs, system.y, rcond=None)
    beta = scaled_beta / norms
    resid = system.y - system.X @ beta

    ssr = float(resid @ resid)
    tss_within = float(system.y @ system.y)
    centred = design.y - design.y.mean()
    tss = float(centred @ centred)
    within_r2 = 1.0 - ssr / tss_within if tss_within > 0 else float("nan")
    r2 = 1.0 - ssr / tss if tss > 0 else float("nan")

    clusters, n_clusters = design.cluster_codes()
    k = len(design.columns)
    if compute_vcov:
        bread = np.linalg.inv(Xs.T @ Xs) / np.outer(norms, norms)
        vcov = cluster_robust_vcov(system.X, resid, clusters, bread=bread)
    else:
        vcov = np.full((k, k), np.nan)

    fixed_effects: dict[str, dict[str, float]] = {}
    residuals = None
    if recover_effects:
        raw = design.y - design.X @ beta
        effects = recover_fixed_effects(raw, factors, defaults.absorb_tol, defaults.max_sweeps)
        for (name, labels), values in zip(design.fe_labels().items(), effects):
            uniques = np.unique(labels)
            fixed_effects[name] = {str(u): float(v) for u, v in zip(uniques, values)}
        residuals = pd.Series(
            resid,
            index=pd.MultiIndex.from_frame(design.rows[["province_id", "year"]]),
            name="residual",
        )

    logger.debug(
        "Fitted %s: %d rows, %d columns, %d clusters, within R2 %.4f",
        design.spec.name, design.n_obs, k, n_clusters, within_r2,
    )
    return FitResult(
        spec=design.spec,
        coef_names=tuple(design.columns),
        coefficients=beta,
        vcov=vcov,
        n_obs=design.n_obs,
        r2=r2,
        within_r2=within_r2,
        cluster_count=n_clusters,
        residuals=residuals,
        fixed_effects=fixed_effects,
        province_means=design.province_means,
    )


def _check_income_groups(design: Design) -> None:
    provinces = design.rows.groupby(LOW_INCOME_COLUMN)["province_id"].nunique()
    for flag, label in ((True, "low"), (False, "high")):
        if int(provinces.get(flag, 0)) == 1:
            raise DegenerateClusteringError(
                f"The {label}-income group has a single province",
                details={"group": label, "provinces": 1},
                suggestion="Income interactions need at least two provinces per group",
            )


def fit(
    spec: ModelSpec,
    data: PanelDataset,
    defaults: EstimationDefaults | None = None,
    compute_vcov: bool = True,
) -> FitResult:
    """Build the design for ``spec`` and fit it."""
    design = build_design(spec, data)
    if spec.is_interacted:
        _check_income_groups(design)
    return fit_design(design, defaults, compute_vcov=compute_vcov)


def fit_interacted(
    spec: ModelSpec,
    data: PanelDataset,
    defaults: EstimationDefaults | None = None,
) -> FitResult:
    """Fit with separate low- and high-income coefficient sets.

    Raises:
        ValidationError: If ``spec`` has no income interaction.
        DegenerateClusteringError: If either income group holds a single province.
        CollinearDesignError: If either income group is empty.
    """
    if not spec.is_interacted:
        raise ValidationError(
            "fit_interacted needs interaction=low_income",
            suggestion="Use spec.with_changes(interaction=Interaction.LOW_INCOME)",
        )
    return fit(spec, data, defaults)
