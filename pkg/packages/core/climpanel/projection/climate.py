"""Projected climate regressors per climate model and RCP.

Files live at ``<climate_dir>/<rcp>/<model>.csv`` with columns
``province_id,year,<regressor columns>``, using the same column names as the
aggregate output. Observed regressors come from the estimation panel.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import pandas as pd

from climpanel.errors import ConfigurationError, MissingBaselineError, MissingDataError, UniquenessViolation
from climpanel.estimation.design import temperature_block
from climpanel.estimation.spec import ModelSpec
from climpanel.utils.io import read_csv
from climpanel.utils.logging import get_logger

KEY = ["province_id", "year"]

logger = get_logger("climpanel.projection")


def _keyed(frame: pd.DataFrame, label: str) -> pd.DataFrame:
    df = frame.copy()
    df["province_id"] = df["province_id"].astype(str)
    df["year"] = df["year"].astype(int)
    dup = df.duplicated(KEY)
    if dup.any():
        row = df[dup].iloc[0]
        raise UniquenessViolation(
            f"{label}: duplicate row for province {row['province_id']} in {row['year']}",
            details={"province": row["province_id"], "year": int(row["year"])},
        )
    return df.sort_values(KEY, kind="stable").reset_index(drop=True)


def _window_mean(frame: pd.DataFrame, window: tuple[int, int], provinces: list[str], label: str) -> pd.DataFrame:
    start, end = window
    rows = frame[(frame["year"] >= start) & (frame["year"] <= end)]
    means = rows.groupby("province_id").mean(numeric_only=True).drop(columns="year", errors="ignore")
    missing = [p for p in provinces if p not in means.index]
    if missing:
        raise MissingBaselineError(
            f"{label} has no rows in {start}-{end} for provinces {missing}",
            details={"window": [start, end], "provinces": missing},
        )
    return means.loc[provinces]


@dataclass
class ClimateScenarioData:
    """Projected regressors for one (rcp, model), plus the observed regressors."""

    model_id: str
    rcp: str
    projected: pd.DataFrame
    observed: pd.DataFrame | None = None

    def __post_init__(self) -> None:
        self.projected = _keyed(self.projected, f"Climate {self.rcp}/{self.model_id}")
        if self.observed is not None:
            self.observed = _keyed(self.observed, "Observed regressors")

    def with_observed(self, observed: pd.DataFrame) -> ClimateScenarioData:
        return ClimateScenarioData(self.model_id, self.rcp, self.projected, observed)

    @property
    def provinces(self) -> list[str]:
        return sorted(self.projected["province_id"].unique())

    def _temperature(self, frame: pd.DataFrame, spec: ModelSpec) -> pd.DataFrame:
        block = temperature_block(frame, spec)
        return pd.concat([frame[KEY], block], axis=1)

    def projected_regressors(self, spec: ModelSpec) -> pd.DataFrame:
        """Temperature regressors of ``spec`` indexed by (province_id, year)."""
        return self._temperature(self.projected, spec).set_index(KEY)

    def _require_observed(self) -> pd.DataFrame:
        if self.observed is None:
            raise MissingBaselineError(
                f"Climate {self.rcp}/{self.model_id} has no observed regressors attached",
                suggestion="Attach the panel with with_observed()",
            )
        return self.observed

    def baseline_mean(self, spec: ModelSpec, window: tuple[int, int], provinces: list[str]) -> pd.DataFrame:
        """Observed regressor averages over ``window``, one row per province."""
        observed = self._temperature(self._require_observed(), spec)
        return _window_mean(observed, window, provinces, "Observed regressors")

    def projected_mean(self, spec: ModelSpec, window: tuple[int, int], provinces: list[str]) -> pd.DataFrame:
        """Projected regressor averages over ``window``, one row per province."""
        projected = self._temperature(self.projected, spec)
        return _window_mean(projected, window, provinces, f"Climate {self.rcp}/{self.model_id}")

    def check_coverage(self, provinces: list[str], start: int, end: int) -> None:
        """Raise MissingDataError unless every province has every year start..end."""
        years = set(range(start, end + 1))
        present = self.projected.groupby("province_id")["year"].apply(set)
        for province in provinces:
            gap = sorted(years - present.get(province, set()))
            if gap:
                raise MissingDataError(
                    f"Climate {self.rcp}/{self.model_id} lacks province {province} in {gap[0]}",
                    details={"province": province, "year": gap[0], "model": self.model_id},
                )


def load_climate(path: Path, model_id: str, rcp: str) -> ClimateScenarioData:
    frame = read_csv(Path(path), KEY, f"Climate {rcp}/{model_id}")
    return ClimateScenarioData(model_id=model_id, rcp=rcp, projected=frame)


def discover_climate(climate_dir: Path, rcps: list[str] | None = None) -> list[ClimateScenarioData]:
    """Load every ``<rcp>/<model>.csv`` under ``climate_dir``, sorted by (rcp, model).

    Raises:
        ConfigurationError: If the directory is missing or holds no scenarios.
    """
    climate_dir = Path(climate_dir)
    if not climate_dir.is_dir():
        raise ConfigurationError(
            f"Climate directory not found: {climate_dir}",
            details={"path": str(climate_dir)},
            suggestion="Expected <climate-dir>/<rcp>/<model>.csv",
        )
    scenarios = []
    for rcp_dir in sorted(p for p in climate_dir.iterdir() if p.is_dir()):
        if rcps and rcp_dir.name not in rcps:
            continue
        for path in sorted(rcp_dir.glob("*.csv")):
            scenarios.append(load_climate(path, path.stem, rcp_dir.name))
    if not scenarios:
        raise ConfigurationError(
            f"No climate scenarios under {climate_dir}" + (f" for {rcps}" if rcps else ""),
            details={"path": str(climate_dir), "rcps": rcps},
        )
    logger.info("Loaded %d climate scenarios from %s", len(scenarios), climate_dir)
    return scenarios
