"""Named specifications: robustness checks and projection response functions."""

from __future__ import annotations

from collections.abc import Callable

from climpanel.errors import ConfigurationError
from climpanel.estimation.spec import (
    FixedEffect,
    Interaction,
    ModelSpec,
    PrecipControl,
    Trend,
)

_ROBUSTNESS: dict[str, Callable[[ModelSpec], ModelSpec]] = {
    "baseline": lambda s: s,
    "no_precip": lambda s: s.with_changes(precip_control=PrecipControl.NONE),
    "region_year_fe": lambda s: s.with_changes(
        fixed_effects=(FixedEffect.PROVINCE, FixedEffect.REGION_YEAR)
    ),
    "province_trends": lambda s: s.with_changes(trends=Trend.QUADRATIC_PROVINCE),
    "djo": lambda s: s.with_changes(
        fixed_effects=(FixedEffect.PROVINCE, FixedEffect.REGION_YEAR, FixedEffect.POOR_YEAR)
    ),
    "country_trends": lambda s: s.with_changes(trends=Trend.QUADRATIC_COUNTRY),
    "balanced": lambda s: s.with_changes(balanced=True),
    "lagged_dv": lambda s: s.with_changes(lagged_dependent=True),
}

ROBUSTNESS_VARIANTS = tuple(_ROBUSTNESS)

PROJECTION_VARIANTS: dict[str, ModelSpec] = {
    "common_nolag": ModelSpec.polynomial(2, name="common_nolag"),
    "common_lag5": ModelSpec.polynomial(2, n_lags=5, name="common_lag5"),
    "highlow_nolag": ModelSpec.polynomial(
        2, interaction=Interaction.LOW_INCOME, name="highlow_nolag"
    ),
    "highlow_lag5": ModelSpec.polynomial(
        2, n_lags=5, interaction=Interaction.LOW_INCOME, name="highlow_lag5"
    ),
}


def robustness_spec(name: str, base: ModelSpec | None = None) -> ModelSpec:
    """Apply a named robustness change to ``base`` (default: quadratic baseline)."""
    if name not in _ROBUSTNESS:
        raise ConfigurationError(
            f"Unknown robustness variant: {name}",
            suggestion=f"Choose one of: {', '.join(ROBUSTNESS_VARIANTS)}",
        )
    base = base or ModelSpec.polynomial(2)
    return _ROBUSTNESS[name](base).with_changes(name=name)


def projection_spec(name: str) -> ModelSpec:
    if name not in PROJECTION_VARIANTS:
        raise ConfigurationError(
            f"Unknown projection variant: {name}",
            suggestion=f"Choose one of: {', '.join(PROJECTION_VARIANTS)}",
        )
    return PROJECTION_VARIANTS[name]
