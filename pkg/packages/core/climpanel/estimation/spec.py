"""Model specifications for fixed-effects growth regressions.

A ModelSpec fixes the temperature functional form, the lag length, the
income interaction, the fixed effects and the controls. Specs are stored as
flat key/value YAML files (spec.cfg) with one key per field.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field, replace
from enum import Enum
from pathlib import Path
from typing import Any

import numpy as np
import yaml

from climpanel.errors import ConfigurationError, InvalidBinsError, NotFoundError, ValidationError
from climpanel.utils.io import atomic_write

MAX_LAGS = 5
DEFAULT_BIN_EDGES = (13.0, 18.0, 23.0, 28.0, 33.0, 38.0)


class FormKind(Enum):
    """Temperature functional form."""

    POLYNOMIAL = "polynomial"
    BINS = "bins"
    DEGREE_DAYS = "degree_days"
    INTERACTED_AVERAGE = "interacted_average"


class IncomeKind(Enum):
    """Income term used by the interacted-average form."""

    NONE = "none"
    LEVEL = "level"
    LOG = "log"


class Interaction(Enum):
    NONE = "none"
    LOW_INCOME = "low_income"


class FixedEffect(Enum):
    PROVINCE = "province"
    YEAR = "year"
    REGION_YEAR = "region_year"
    POOR_YEAR = "poor_year"


class Trend(Enum):
    NONE = "none"
    QUADRATIC_COUNTRY = "quadratic_country"
    QUADRATIC_PROVINCE = "quadratic_province"


class PrecipControl(Enum):
    NONE = "none"
    MATCHED = "matched"


_ENUM_FIELDS: dict[str, type[Enum]] = {
    "form": FormKind,
    "income_kind": IncomeKind,
    "interaction": Interaction,
    "trends": Trend,
    "precip_control": PrecipControl,
}


@dataclass(frozen=True)
class ModelSpec:
    """One regression specification.

    Only the fields relevant to ``form`` are used: ``order`` for polynomials,
    ``bin_edges``/``omitted_bin`` for bins, the thresholds for degree days and
    ``income_kind`` for the interacted-average form.
    """

    form: FormKind = FormKind.POLYNOMIAL
    order: int = 2
    bin_edges: tuple[float, ...] = DEFAULT_BIN_EDGES
    omitted_bin: int = 3
    hdd_threshold: float = 23.0
    cdd_threshold: float = 28.0
    income_kind: IncomeKind = IncomeKind.NONE
    n_lags: int = 0
    interaction: Interaction = Interaction.NONE
    fixed_effects: tuple[FixedEffect, ...] = (FixedEffect.PROVINCE, FixedEffect.YEAR)
    trends: Trend = Trend.NONE
    precip_control: PrecipControl = PrecipControl.MATCHED
    precip_omitted_bin: int = 0
    lagged_dependent: bool = False
    balanced: bool = False
    outcome: str = "growth"
    name: str = field(default="custom", compare=False)

    def __post_init__(self) -> None:
        if not 0 <= self.n_lags <= MAX_LAGS:
            raise ValidationError(
                f"n_lags must be between 0 and {MAX_LAGS}, got {self.n_lags}",
                details={"n_lags": self.n_lags},
            )
        if self.form is FormKind.POLYNOMIAL and not 1 <= self.order <= 7:
            raise ValidationError(
                f"Polynomial order must be between 1 and 7, got {self.order}",
                details={"order": self.order},
            )
        if self.form is FormKind.BINS:
            edges = np.asarray(self.bin_edges, dtype=float)
            if edges.size == 0 or np.any(np.diff(edges) <= 0):
                raise InvalidBinsError(
                    "Bin edges must be non-empty and strictly ascending",
                    details={"bin_edges": list(self.bin_edges)},
                )
            if not 0 <= self.omitted_bin <= edges.size:
                raise InvalidBinsError(
                    f"omitted_bin {self.omitted_bin} is not one of the {edges.size + 1} bins",
                    details={"omitted_bin": self.omitted_bin},
                )
        if self.form is FormKind.DEGREE_DAYS and self.hdd_threshold > self.cdd_threshold:
            raise ValidationError(
                "hdd_threshold must not exceed cdd_threshold",
                details={"hdd_threshold": self.hdd_threshold, "cdd_threshold": self.cdd_threshold},
            )
        if self.form is FormKind.INTERACTED_AVERAGE and (
            self.n_lags or self.interaction is not Interaction.NONE
        ):
            raise ValidationError(
                "The interacted-average form supports neither lags nor income interactions",
                details={"n_lags": self.n_lags, "interaction": self.interaction.value},
            )
        if len(set(self.fixed_effects)) != len(self.fixed_effects):
            raise ValidationError("Duplicate fixed effects in spec")

    # -------------------------------------------------------------------------
    # Constructors
    # -------------------------------------------------------------------------

    @classmethod
    def polynomial(cls, order: int = 2, **kwargs: Any) -> ModelSpec:
        return cls(form=FormKind.POLYNOMIAL, order=order, **kwargs)

    @classmethod
    def bins(cls, edges: tuple[float, ...] = DEFAULT_BIN_EDGES, omitted_bin: int = 3, **kwargs: Any) -> ModelSpec:
        return cls(form=FormKind.BINS, bin_edges=tuple(float(e) for e in edges), omitted_bin=omitted_bin, **kwargs)

    @classmethod
    def degree_days(cls, hdd_threshold: float = 23.0, cdd_threshold: float = 28.0, **kwargs: Any) -> ModelSpec:
        return cls(
            form=FormKind.DEGREE_DAYS,
            hdd_threshold=hdd_threshold,
            cdd_threshold=cdd_threshold,
            **kwargs,
        )

    @classmethod
    def interacted_average(cls, income_kind: IncomeKind = IncomeKind.NONE, **kwargs: Any) -> ModelSpec:
        return cls(form=FormKind.INTERACTED_AVERAGE, income_kind=income_kind, **kwargs)

    def with_changes(self, **changes: Any) -> ModelSpec:
        return replace(self, **changes)

    @property
    def is_interacted(self) -> bool:
        return self.interaction is Interaction.LOW_INCOME

    # -------------------------------------------------------------------------
    # Serialization
    # -------------------------------------------------------------------------

    def to_dict(self) -> dict[str, Any]:
        data = asdict(self)
        for key in _ENUM_FIELDS:
            data[key] = getattr(self, key).value
        data["fixed_effects"] = [fe.value for fe in self.fixed_effects]
        data["bin_edges"] = list(self.bin_edges)
        return data

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> ModelSpec:
        known = {f for f in cls.__dataclass_fields__}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigurationError(
                f"Unknown spec keys: {unknown}",
                details={"unknown": unknown},
                suggestion=f"Valid keys: {sorted(known)}",
            )
        kwargs: dict[str, Any] = dict(data)
        try:
            for key, enum_type in _ENUM_FIELDS.items():
                if key in kwargs:
                    kwargs[key] = enum_type(str(kwargs[key]).lower())
            if "fixed_effects" in kwargs:
                raw = kwargs["fixed_effects"]
                if isinstance(raw, str):
                    raw = [part.strip() for part in raw.split(",") if part.strip()]
                kwargs["fixed_effects"] = tuple(FixedEffect(str(v).lower()) for v in raw or [])
            if "bin_edges" in kwargs:
                raw = kwargs["bin_edges"]
                if isinstance(raw, str):
                    raw = [part for part in raw.split(",") if part.strip()]
                kwargs["bin_edges"] = tuple(float(v) for v in raw)
        except ValueError as e:
            raise ConfigurationError(f"Invalid spec value: {e}") from e
        return cls(**kwargs)


def load_model_spec(path: Path) -> ModelSpec:
    """Load a flat key/value spec file."""
    path = Path(path)
    if not path.exists():
        raise NotFoundError(f"Spec file not found: {path}", details={"path": str(path)})
    with open(path) as f:
        data = yaml.safe_load(f) or {}
    if not isinstance(data, dict):
        raise ConfigurationError(f"Spec file {path} must be a flat key/value mapping")
    spec = ModelSpec.from_dict(data)
    if "name" not in data:
        spec = replace(spec, name=path.stem)
    return spec


def save_model_spec(spec: ModelSpec, path: Path) -> None:
    atomic_write(Path(path), lambda handle: yaml.safe_dump(spec.to_dict(), handle, sort_keys=False))
