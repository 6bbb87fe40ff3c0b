"""Out-of-time and leave-one-province-out scoring of candidate bin layouts."""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass, field
from enum import Enum
from time import perf_counter

import numpy as np
import pandas as pd

from climpanel.errors import TooFewGroupsError, ValidationError
from climpanel.estimation.design import Design, build_design
from climpanel.estimation.fit import FitResult, fit_design
from climpanel.estimation.panel import PanelDataset
from climpanel.estimation.spec import ModelSpec
from climpanel.selection.candidates import SUPPORT, CandidateBinConfig
from climpanel.utils.config import EstimationDefaults
from climpanel.utils.logging import get_logger

logger = get_logger("climpanel.selection")

SPLIT_YEAR = 2014
TIE_TOL = 1e-6


class YearEffectImputation(Enum):
    """Year effect used for out-of-period test years."""

    TRAIN_MEAN = "train_mean"
    LAST_TRAIN_YEAR = "last_train_year"


@dataclass(frozen=True)
class RmseScore:
    rmse: float
    n_rows: int
    n_skipped: int = 0


@dataclass(frozen=True)
class CandidateScore:
    candidate: CandidateBinConfig
    rmse_oot: float
    rmse_oos: float
    oot_skipped: int = 0


@dataclass
class CvReport:
    """Scores for every candidate and the selected winner."""

    scores: list[CandidateScore]
    winner: CandidateBinConfig
    split_year: int = SPLIT_YEAR
    runtime_seconds: float = 0.0
    skipped: dict[str, int] = field(default_factory=dict)

    def to_frame(self) -> pd.DataFrame:
        rows = []
        for s in self.scores:
            rows.append(
                {
                    "lower_edge": s.candidate.lower_edge,
                    "interval": s.candidate.interval,
                    "omitted_low": s.candidate.omitted[0],
                    "omitted_high": s.candidate.omitted[1],
                    "rmse_oot": s.rmse_oot,
                    "rmse_oos": s.rmse_oos,
                    "oot_skipped": s.oot_skipped,
                    "winner": s.candidate == self.winner,
                }
            )
        return pd.DataFrame(rows)


def _rmse(errors: np.ndarray) -> float:
    return float(np.sqrt(np.mean(errors**2)))


def _effects_for_rows(
    fitted: FitResult,
    labels: dict[str, np.ndarray],
    skip: str | None,
    fallback: dict[str, float],
) -> np.ndarray:
    """Sum of fitted fixed effects for each row; unseen labels take ``fallback``."""
    total = np.zeros(len(next(iter(labels.values()))))
    for name, row_labels in labels.items():
        if name == skip:
            continue
        effects = fitted.fixed_effects[name]
        total += np.array([effects.get(str(lbl), fallback[name]) for lbl in row_labels])
    return total


def _design_for(candidate: CandidateBinConfig, data: PanelDataset, base: ModelSpec | None) -> Design:
    return build_design(candidate.to_spec(base, SUPPORT), data)


def _fit_populated(
    train: Design, candidate: CandidateBinConfig, defaults: EstimationDefaults | None
) -> tuple[FitResult, np.ndarray]:
    """Fit on the bins the training rows fill; returns the fit and the kept-column mask.

    Held-out rows in a dropped bin get no contribution from it, as in the
    omitted bin.
    """
    keep = train.populated_columns()
    if not keep.all():
        dropped = [c for c, k in zip(train.columns, keep) if not k]
        logger.info("Candidate %s: bins empty in training dropped: %s", candidate.id, dropped)
        train = train.select_columns(keep)
    return fit_design(train, defaults, compute_vcov=False), keep


def oot_rmse(
    candidate: CandidateBinConfig,
    data: PanelDataset,
    split_year: int = SPLIT_YEAR,
    base: ModelSpec | None = None,
    year_effect: YearEffectImputation = YearEffectImputation.TRAIN_MEAN,
    defaults: EstimationDefaults | None = None,
) -> RmseScore:
    """Fit on years <= split_year and score predictions for later years.

    Test rows predict with the train province effect plus an imputed year
    effect. Rows of provinces absent from the train period are skipped.
    """
    design = _design_for(candidate, data, base)
    years = design.rows["year"].to_numpy()
    train_mask, test_mask = years <= split_year, years > split_year
    if not train_mask.any() or not test_mask.any():
        raise ValidationError(
            f"Both periods around split year {split_year} must be non-empty",
            details={"split_year": split_year},
        )
    fitted, keep = _fit_populated(design.mask(train_mask), candidate, defaults)

    test = design.mask(test_mask)
    known = set(fitted.fixed_effects.get("province", {}))
    province_col = test.rows["province_id"].astype(str).to_numpy()
    seen = np.isin(province_col, list(known)) if known else np.ones(len(province_col), bool)
    n_skipped = int((~seen).sum())
    if n_skipped:
        logger.info("OOT %s: skipped %d rows of provinces absent from training", candidate.id, n_skipped)
    if not seen.any():
        raise ValidationError("No test rows belong to provinces seen in training")
    test = test.mask(seen)

    fallback = {name: float(np.mean(list(v.values()))) for name, v in fitted.fixed_effects.items()}
    if year_effect is YearEffectImputation.LAST_TRAIN_YEAR and "year" in fitted.fixed_effects:
        fallback["year"] = fitted.fixed_effects["year"][str(int(years[train_mask].max()))]
    # every test year is unseen, so the year factor always takes the fallback
    effects = _effects_for_rows(fitted, test.fe_labels(), None, fallback)
    predicted = test.X[:, keep] @ fitted.coefficients + effects
    return RmseScore(rmse=_rmse(test.y - predicted), n_rows=test.n_obs, n_skipped=n_skipped)


def group_kfold_rmse(
    candidate: CandidateBinConfig,
    data: PanelDataset,
    end_year: int = SPLIT_YEAR,
    base: ModelSpec | None = None,
    defaults: EstimationDefaults | None = None,
) -> RmseScore:
    """Leave-one-province-out RMSE over years <= end_year, pooling residuals.

    The held-out province's own effect is unavailable, so predictions and
    outcomes are both within-transformed over that province's years.
    """
    design = _design_for(candidate, data, base)
    design = design.mask(design.rows["year"].to_numpy() <= end_year)
    provinces = design.rows["province_id"].astype(str).to_numpy()
    groups = sorted(set(provinces))
    if len(groups) < 2:
        raise TooFewGroupsError(
            f"Group k-fold needs at least 2 provinces, got {len(groups)}",
            details={"provinces": len(groups)},
        )

    errors: list[np.ndarray] = []
    for province in groups:
        held = provinces == province
        fitted, keep = _fit_populated(design.mask(~held), candidate, defaults)
        test = design.mask(held)
        fallback = {name: float(np.mean(list(v.values()))) for name, v in fitted.fixed_effects.items()}
        effects = _effects_for_rows(fitted, test.fe_labels(), "province", fallback)
        X_within = test.X[:, keep] - test.X[:, keep].mean(axis=0)
        y_within = test.y - test.y.mean()
        predicted = X_within @ fitted.coefficients + (effects - effects.mean())
        errors.append(y_within - predicted)
    pooled = np.concatenate(errors)
    return RmseScore(rmse=_rmse(pooled), n_rows=int(pooled.size))


def select(
    candidates: Sequence[CandidateBinConfig],
    data: PanelDataset,
    split_year: int = SPLIT_YEAR,
    base: ModelSpec | None = None,
    year_effect: YearEffectImputation = YearEffectImputation.TRAIN_MEAN,
    defaults: EstimationDefaults | None = None,
) -> CvReport:
    """Score every candidate; the winner minimises OOT RMSE, then OOS RMSE on ties."""
    if not candidates:
        raise ValidationError("No candidates to evaluate")

    start_time = perf_counter()
    scores: list[CandidateScore] = []
    for candidate in sorted(set(candidates)):
        oot = oot_rmse(candidate, data, split_year, base, year_effect, defaults)
        oos = group_kfold_rmse(candidate, data, split_year, base, defaults)
        scores.append(
            CandidateScore(
                candidate=candidate,
                rmse_oot=oot.rmse,
                rmse_oos=oos.rmse,
                oot_skipped=oot.n_skipped,
            )
        )
        logger.info("Candidate %s: OOT %.6f OOS %.6f", candidate.id, oot.rmse, oos.rmse)

    best_oot = min(s.rmse_oot for s in scores)
    tied = [s for s in scores if s.rmse_oot - best_oot <= TIE_TOL]
    winner = min(tied, key=lambda s: (s.rmse_oos, s.candidate)).candidate
    runtime = perf_counter() - start_time
    logger.info("Selected %s from %d candidates in %.2fs", winner.id, len(scores), runtime)
    return CvReport(
        scores=scores,
        winner=winner,
        split_year=split_year,
        runtime_seconds=runtime,
        skipped={s.candidate.id: s.oot_skipped for s in scores if s.oot_skipped},
    )
