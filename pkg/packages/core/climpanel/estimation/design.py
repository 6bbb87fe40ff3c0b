"""Design matrix construction for fixed-effects growth regressions.

Column order is temperature terms by lag, precipitation terms by lag,
trends, then the lagged outcome. Income-group copies sit next to their
source column (``<name>_low``, ``<name>_high``). Lagged columns carry an
``_L<l>`` suffix. Rows are ordered by (province, year) and rows with any
missing lag are dropped, as are bin columns no day in the sample falls
into.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace

import numpy as np
import pandas as pd

from climpanel.errors import TooFewObservationsError, ValidationError
from climpanel.estimation.panel import LOW_INCOME_COLUMN, PanelDataset
from climpanel.estimation.spec import FixedEffect, FormKind, IncomeKind, ModelSpec, PrecipControl, Trend
from climpanel.utils.logging import get_logger
from climpanel.weather.regressors import (
    PRECIP,
    PRECIP_SQ,
    cdd_column,
    coarsen_bins,
    hdd_column,
    poly_column,
    precip_bin_columns_in,
)

TEMPERATURE = "temperature"
PRECIPITATION = "precipitation"
TREND = "trend"
LAGGED_DV = "lagged_dv"

_TERM_RE = re.compile(r"^(?P<base>.+?)(?:_L(?P<lag>[1-9]\d*))?(?:_(?P<group>low|high))?$")
_TEMPERATURE_PREFIXES = ("temp_p", "tbin_", "hdd_", "cdd_")
_PRECIP_PREFIXES = ("precip", "pbin_")

INCOME_SCALE = 1e5
_BIN_PREFIXES = ("tbin_", "pbin_")

logger = get_logger("climpanel.estimation")


@dataclass(frozen=True)
class Term:
    """Decoded design column name."""

    name: str
    base: str
    lag: int
    group: str | None
    family: str


def parse_term(name: str, outcome: str = "growth") -> Term:
    match = _TERM_RE.match(name)
    if match is None:
        raise ValidationError(f"Cannot parse design column {name!r}")
    base = match.group("base")
    lag = int(match.group("lag") or 0)
    if base.startswith(_TEMPERATURE_PREFIXES):
        family = TEMPERATURE
    elif base.startswith(_PRECIP_PREFIXES):
        family = PRECIPITATION
    elif base.startswith("trend_"):
        family = TREND
    elif base == outcome:
        family = LAGGED_DV
    else:
        family = "other"
    return Term(name=name, base=base, lag=lag, group=match.group("group"), family=family)


def days_in_year(years: pd.Series | np.ndarray) -> np.ndarray:
    y = np.asarray(years, dtype=int)
    leap = (y % 4 == 0) & ((y % 100 != 0) | (y % 400 == 0))
    return np.where(leap, 366, 365)


@dataclass
class Design:
    """Regression inputs aligned row by row with ``rows``."""

    spec: ModelSpec
    X: np.ndarray
    y: np.ndarray
    columns: list[str]
    rows: pd.DataFrame
    province_means: dict[str, dict[str, float]] = field(default_factory=dict)

    @property
    def terms(self) -> list[Term]:
        return [parse_term(c, self.spec.outcome) for c in self.columns]

    @property
    def n_obs(self) -> int:
        return int(self.X.shape[0])

    def fe_labels(self) -> dict[str, np.ndarray]:
        """Label arrays for each absorbed factor (a constant when no FE is requested)."""
        rows = self.rows
        province = rows["province_id"].astype(str).to_numpy()
        year = rows["year"].astype(str).to_numpy()
        labels: dict[str, np.ndarray] = {}
        for fe in self.spec.fixed_effects:
            if fe is FixedEffect.PROVINCE:
                labels[fe.value] = province
            elif fe is FixedEffect.YEAR:
                labels[fe.value] = year
            elif fe is FixedEffect.REGION_YEAR:
                labels[fe.value] = rows["region_id"].astype(str).to_numpy() + "|" + year
            elif fe is FixedEffect.POOR_YEAR:
                labels[fe.value] = rows[LOW_INCOME_COLUMN].astype(int).astype(str).to_numpy() + "|" + year
        if not labels:
            labels["constant"] = np.zeros(len(rows), dtype=int).astype(str)
        return labels

    def factor_codes(self) -> list[np.ndarray]:
        return [pd.factorize(labels, sort=True)[0] for labels in self.fe_labels().values()]

    def cluster_codes(self) -> tuple[np.ndarray, int]:
        codes, uniques = pd.factorize(self.rows["province_id"].astype(str), sort=True)
        return codes, len(uniques)

    def take(self, positions: np.ndarray, province_labels: np.ndarray | None = None) -> Design:
        """Row subset, optionally relabelling provinces (bootstrap duplicates)."""
        rows = self.rows.iloc[positions].reset_index(drop=True)
        if province_labels is not None:
            rows["province_id"] = province_labels
        return replace(self, X=self.X[positions], y=self.y[positions], rows=rows)

    def mask(self, keep: np.ndarray) -> Design:
        return self.take(np.flatnonzero(keep))

    def populated_columns(self) -> np.ndarray:
        """False for bin columns no row of this design falls into."""
        return np.array(
            [not c.startswith(_BIN_PREFIXES) or bool(self.X[:, j].any()) for j, c in enumerate(self.columns)],
            dtype=bool,
        )

    def select_columns(self, keep: np.ndarray) -> Design:
        positions = np.flatnonzero(keep)
        return replace(self, X=self.X[:, positions], columns=[self.columns[j] for j in positions])


# =============================================================================
# Blocks
# =============================================================================


def _require(frame: pd.DataFrame, columns: list[str]) -> None:
    missing = [c for c in columns if c not in frame.columns]
    if missing:
        raise ValidationError(
            f"Panel is missing regressor columns: {missing}",
            details={"missing": missing},
            suggestion="Run 'climpanel aggregate' and merge its output into the panel",
        )


def _province_mean(frame: pd.DataFrame, values: pd.Series) -> pd.Series:
    return values.groupby(frame["province_id"]).transform("mean")


def _income_term(frame: pd.DataFrame, kind: IncomeKind) -> pd.Series:
    _require(frame, ["gpp_pc"])
    means = frame.groupby("province_id")["gpp_pc"].mean()
    if kind is IncomeKind.LOG:
        if (means <= 0).any():
            raise ValidationError("gpp_pc must be positive for the log income term")
        level = np.log(means)
    else:
        level = means / INCOME_SCALE
    centred = level - level.mean()
    return frame["province_id"].map(centred).astype(float)


def _interacted_average_blocks(
    frame: pd.DataFrame, spec: ModelSpec
) -> tuple[pd.DataFrame, pd.DataFrame, dict[str, dict[str, float]]]:
    _require(frame, [poly_column(1), PRECIP])
    days = days_in_year(frame["year"])
    t = frame[poly_column(1)].astype(float)
    r = frame[PRECIP].astype(float)
    t_bar = _province_mean(frame, t / days)
    r_bar = _province_mean(frame, r / days)

    temp = pd.DataFrame({"temp_p1": t, "temp_p1_x_tbar": t * t_bar}, index=frame.index)
    precip = pd.DataFrame({"precip": r, "precip_x_rbar": r * r_bar}, index=frame.index)
    if spec.income_kind is not IncomeKind.NONE:
        income = _income_term(frame, spec.income_kind)
        temp["temp_p1_x_income"] = t * income
        precip["precip_x_income"] = r * income

    means = {
        "tbar": t_bar.groupby(frame["province_id"]).first().to_dict(),
        "rbar": r_bar.groupby(frame["province_id"]).first().to_dict(),
    }
    if spec.precip_control is PrecipControl.NONE:
        precip = precip.iloc[:, :0]
    return temp, precip, means


def temperature_block(frame: pd.DataFrame, spec: ModelSpec) -> pd.DataFrame:
    """Unlagged temperature regressors for polynomial, bin and degree-day forms."""
    if spec.form is FormKind.POLYNOMIAL:
        cols = [poly_column(m) for m in range(1, spec.order + 1)]
        _require(frame, cols)
        return frame[cols].astype(float)
    if spec.form is FormKind.BINS:
        coarse = coarsen_bins(frame, spec.bin_edges)
        return coarse.drop(columns=coarse.columns[spec.omitted_bin])
    if spec.form is FormKind.DEGREE_DAYS:
        cols = [hdd_column(spec.hdd_threshold), cdd_column(spec.cdd_threshold)]
        _require(frame, cols)
        return frame[cols].astype(float)
    raise ValidationError(f"No temperature block for form {spec.form.value}")


def precip_block(frame: pd.DataFrame, spec: ModelSpec) -> pd.DataFrame:
    """Unlagged precipitation controls matched to the temperature form."""
    if spec.precip_control is PrecipControl.NONE:
        return pd.DataFrame(index=frame.index)
    if spec.form is FormKind.POLYNOMIAL:
        cols = [PRECIP, PRECIP_SQ]
    elif spec.form is FormKind.DEGREE_DAYS:
        cols = [PRECIP]
    else:
        bins = precip_bin_columns_in(list(frame.columns))
        if not bins:
            raise ValidationError(
                "Panel has no precipitation bin columns",
                suggestion="Run 'climpanel aggregate' or set precip_control: none",
            )
        if not 0 <= spec.precip_omitted_bin < len(bins):
            raise ValidationError(
                f"precip_omitted_bin {spec.precip_omitted_bin} is not one of {len(bins)} bins"
            )
        cols = [c for i, c in enumerate(bins) if i != spec.precip_omitted_bin]
    _require(frame, cols)
    return frame[cols].astype(float)


def _lagged(frame: pd.DataFrame, block: pd.DataFrame, lag: int) -> pd.DataFrame:
    if lag == 0:
        return block
    source = block.copy()
    source.index = pd.MultiIndex.from_arrays([frame["province_id"], frame["year"] + lag])
    target = pd.MultiIndex.from_arrays([frame["province_id"], frame["year"]])
    shifted = source.reindex(target)
    shifted.index = frame.index
    return shifted.rename(columns=lambda c: f"{c}_L{lag}")


def _with_lags(frame: pd.DataFrame, block: pd.DataFrame, n_lags: int) -> pd.DataFrame:
    return pd.concat([_lagged(frame, block, lag) for lag in range(n_lags + 1)], axis=1)


def _split_by_income(block: pd.DataFrame, low: pd.Series) -> pd.DataFrame:
    d = low.astype(float).to_numpy()
    parts = {}
    for col in block.columns:
        values = block[col].to_numpy(dtype=float)
        parts[f"{col}_low"] = values * d
        parts[f"{col}_high"] = values * (1.0 - d)
    return pd.DataFrame(parts, index=block.index)


def _trend_block(frame: pd.DataFrame, trend: Trend) -> pd.DataFrame:
    if trend is Trend.NONE:
        return pd.DataFrame(index=frame.index)
    t = (frame["year"] - frame["year"].min()).astype(float)
    if trend is Trend.QUADRATIC_COUNTRY:
        return pd.DataFrame({"trend_t": t, "trend_t2": t**2}, index=frame.index)
    parts = {}
    for province in sorted(frame["province_id"].unique()):
        own = (frame["province_id"] == province).astype(float)
        parts[f"trend_{province}_t"] = t * own
        parts[f"trend_{province}_t2"] = t**2 * own
    return pd.DataFrame(parts, index=frame.index)


# =============================================================================
# Entry point
# =============================================================================


def build_design(spec: ModelSpec, data: PanelDataset) -> Design:
    """Assemble the regression design for ``spec`` on ``data``.

    Raises:
        ValidationError: If a required regressor or metadata column is missing.
        TooFewObservationsError: If too few rows remain after lag construction.
    """
    frame = data.frame
    if spec.balanced:
        n_years = frame["year"].nunique()
        counts = frame.groupby("province_id")["year"].transform("nunique")
        frame = frame[counts == n_years]
    frame = frame.reset_index(drop=True)
    _require(frame, [spec.outcome])

    needs_income = spec.is_interacted or FixedEffect.POOR_YEAR in spec.fixed_effects
    if needs_income and LOW_INCOME_COLUMN not in frame.columns:
        raise ValidationError(
            "Spec needs income groups but the panel has neither low_income nor gpp_pc",
            suggestion="Add a gpp_pc column to the panel",
        )

    province_means: dict[str, dict[str, float]] = {}
    if spec.form is FormKind.INTERACTED_AVERAGE:
        temp, precip, province_means = _interacted_average_blocks(frame, spec)
    else:
        temp = temperature_block(frame, spec)
        precip = precip_block(frame, spec)

    temp = _with_lags(frame, temp, spec.n_lags)
    precip = _with_lags(frame, precip, spec.n_lags)
    if spec.is_interacted:
        temp = _split_by_income(temp, frame[LOW_INCOME_COLUMN])
        precip = _split_by_income(precip, frame[LOW_INCOME_COLUMN])

    blocks = [temp, precip, _trend_block(frame, spec.trends)]
    if spec.lagged_dependent:
        outcome = frame[[spec.outcome]].astype(float)
        blocks.append(_lagged(frame, outcome, 1))
    X = pd.concat(blocks, axis=1)
    y = frame[spec.outcome].astype(float)

    keep = np.isfinite(X.to_numpy(dtype=float)).all(axis=1) & np.isfinite(y.to_numpy())
    n_rows, n_cols = int(keep.sum()), X.shape[1]
    if n_rows == 0 or n_rows <= n_cols:
        raise TooFewObservationsError(
            f"Only {n_rows} usable rows for {n_cols} regressors",
            details={"rows": n_rows, "columns": n_cols, "n_lags": spec.n_lags},
            suggestion="Use fewer lags or a longer panel",
        )

    X = X.loc[keep]
    # bins no day in the sample falls into are not identified
    empty = [c for c in X.columns if c.startswith(_BIN_PREFIXES) and not X[c].any()]
    if empty:
        logger.warning("Dropping bin columns with no days in the sample: %s", empty)
        X = X.drop(columns=empty)

    meta = ["province_id", "year", "region_id"]
    if LOW_INCOME_COLUMN in frame.columns:
        meta.append(LOW_INCOME_COLUMN)
    return Design(
        spec=spec,
        X=X.to_numpy(dtype=float),
        y=y.to_numpy()[keep],
        columns=list(X.columns),
        rows=frame.loc[keep, meta].reset_index(drop=True),
        province_means=province_means,
    )
