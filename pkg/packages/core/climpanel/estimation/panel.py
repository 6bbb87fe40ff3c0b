"""Province-year panel of growth outcomes, regressors and metadata."""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import pandas as pd

from climpanel.errors import InvalidDataError, UniquenessViolation, ValidationError
from climpanel.utils.io import read_csv, write_csv

KEY_COLUMNS = ["province_id", "year"]
REQUIRED_COLUMNS = ["province_id", "year", "growth", "region_id"]
INCOME_COLUMN = "gpp_pc"
LOW_INCOME_COLUMN = "low_income"
SECTOR_PREFIX = "sector_"


def classify_low_income(frame: pd.DataFrame, income_column: str = INCOME_COLUMN) -> pd.Series:
    """Flag provinces whose mean real income per capita is below the cross-province median."""
    means = frame.groupby("province_id")[income_column].mean()
    low = means < means.median()
    return frame["province_id"].map(low).astype(bool)


@dataclass
class PanelDataset:
    """Validated panel sorted by (province_id, year).

    ``low_income`` is fixed per province for the lifetime of the dataset;
    subsets keep the classification of the full sample.
    """

    frame: pd.DataFrame

    @classmethod
    def from_frame(cls, frame: pd.DataFrame) -> PanelDataset:
        """Validate a raw frame and attach the low-income flag.

        Raises:
            ValidationError: If required columns are missing.
            UniquenessViolation: If a (province_id, year) pair repeats.
            InvalidDataError: If growth is not finite or the income flag varies within a province.
        """
        missing = [c for c in REQUIRED_COLUMNS if c not in frame.columns]
        if missing:
            raise ValidationError(
                f"Panel is missing columns: {missing}",
                details={"missing": missing},
                suggestion=f"Expected at least: {','.join(REQUIRED_COLUMNS)}",
            )
        df = frame.copy()
        df["province_id"] = df["province_id"].astype(str)
        df["region_id"] = df["region_id"].astype(str)
        df["year"] = df["year"].astype(int)

        dup = df.duplicated(KEY_COLUMNS, keep="first")
        if dup.any():
            row = df[dup].iloc[0]
            raise UniquenessViolation(
                f"Duplicate panel row for province {row['province_id']} in {row['year']}",
                details={
                    "province": row["province_id"],
                    "year": int(row["year"]),
                    "line": int(np.flatnonzero(dup.to_numpy())[0]) + 2,
                },
            )

        growth = pd.to_numeric(df["growth"], errors="coerce")
        if not np.all(np.isfinite(growth)):
            bad = df.loc[~np.isfinite(growth)].iloc[0]
            raise InvalidDataError(
                f"Growth is not finite for province {bad['province_id']} in {bad['year']}",
                details={"province": bad["province_id"], "year": int(bad["year"])},
            )
        df["growth"] = growth.astype(float)

        if LOW_INCOME_COLUMN in df.columns:
            df[LOW_INCOME_COLUMN] = df[LOW_INCOME_COLUMN].astype(int).astype(bool)
            varying = df.groupby("province_id")[LOW_INCOME_COLUMN].nunique()
            if (varying > 1).any():
                province = varying[varying > 1].index[0]
                raise InvalidDataError(
                    f"low_income flag varies within province {province}",
                    details={"province": province},
                )
        elif INCOME_COLUMN in df.columns:
            df[LOW_INCOME_COLUMN] = classify_low_income(df)

        df = df.sort_values(KEY_COLUMNS, kind="stable").reset_index(drop=True)
        return cls(frame=df)

    # -------------------------------------------------------------------------
    # Accessors
    # -------------------------------------------------------------------------

    def __len__(self) -> int:
        return len(self.frame)

    @property
    def provinces(self) -> list[str]:
        return sorted(self.frame["province_id"].unique())

    @property
    def years(self) -> list[int]:
        return sorted(int(y) for y in self.frame["year"].unique())

    @property
    def has_income_groups(self) -> bool:
        return LOW_INCOME_COLUMN in self.frame.columns

    @property
    def sector_columns(self) -> list[str]:
        return [c for c in self.frame.columns if c.startswith(SECTOR_PREFIX)]

    def low_income_by_province(self) -> dict[str, bool]:
        if not self.has_income_groups:
            raise ValidationError(
                "Panel has neither a low_income nor a gpp_pc column",
                suggestion="Add gpp_pc (real output per capita) so income groups can be derived",
            )
        flags = self.frame.groupby("province_id")[LOW_INCOME_COLUMN].first()
        return {str(k): bool(v) for k, v in flags.items()}

    def region_by_province(self) -> dict[str, str]:
        regions = self.frame.groupby("province_id")["region_id"].first()
        return {str(k): str(v) for k, v in regions.items()}

    def require(self, columns: Sequence[str]) -> None:
        missing = [c for c in columns if c not in self.frame.columns]
        if missing:
            raise ValidationError(
                f"Panel is missing regressor columns: {missing}",
                details={"missing": missing},
                suggestion="Run 'climpanel aggregate' and merge its output into the panel",
            )

    # -------------------------------------------------------------------------
    # Subsets
    # -------------------------------------------------------------------------

    def filter_years(self, start: int | None = None, end: int | None = None) -> PanelDataset:
        mask = pd.Series(True, index=self.frame.index)
        if start is not None:
            mask &= self.frame["year"] >= start
        if end is not None:
            mask &= self.frame["year"] <= end
        return PanelDataset(frame=self.frame[mask].reset_index(drop=True))

    def filter_provinces(self, provinces: Sequence[str]) -> PanelDataset:
        keep = self.frame["province_id"].isin(set(provinces))
        return PanelDataset(frame=self.frame[keep].reset_index(drop=True))

    def merge_regressors(self, regressors: pd.DataFrame) -> PanelDataset:
        """Replace or add regressor columns from an aggregate table."""
        reg = regressors.copy()
        reg["province_id"] = reg["province_id"].astype(str)
        reg["year"] = reg["year"].astype(int)
        overlap = [c for c in reg.columns if c in self.frame.columns and c not in KEY_COLUMNS]
        base = self.frame.drop(columns=overlap)
        merged = base.merge(reg, on=KEY_COLUMNS, how="left", validate="one_to_one")
        return PanelDataset.from_frame(merged)


def load_panel(path: Path) -> PanelDataset:
    """Read and validate a panel CSV."""
    frame = read_csv(Path(path), REQUIRED_COLUMNS, "Panel")
    return PanelDataset.from_frame(frame)


def save_panel(panel: PanelDataset, path: Path) -> None:
    frame = panel.frame.copy()
    if LOW_INCOME_COLUMN in frame.columns:
        frame[LOW_INCOME_COLUMN] = frame[LOW_INCOME_COLUMN].astype(int)
    write_csv(frame, Path(path))
