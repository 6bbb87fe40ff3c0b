"""Response-function evaluation: h(T) relative to a reference temperature."""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
import pandas as pd
from scipy import stats

from climpanel.errors import ValidationError
from climpanel.estimation.design import TEMPERATURE, parse_term
from climpanel.estimation.fit import FitResult
from climpanel.estimation.spec import FormKind, ModelSpec
from climpanel.utils.config import EstimationDefaults
from climpanel.utils.logging import get_logger
from climpanel.weather.regressors import cdd_column, hdd_column, poly_column, temp_bin_columns

DAYS_PER_YEAR = 365
BIN_NOT_IDENTIFIED = "BIN_NOT_IDENTIFIED"

logger = get_logger("climpanel.estimation")


@dataclass(frozen=True)
class ResponseEval:
    """Effect of one day at ``temperature`` versus one day at ``reference``."""

    temperature: float
    reference: float
    effect: float
    std_err: float
    n_lags_included: int
    group: str | None = None


def _bin_of(edges: Sequence[float], temperature: float) -> str:
    names = temp_bin_columns(edges)
    return names[int(np.searchsorted(np.asarray(edges, dtype=float), temperature, side="right"))]


def _base_weight(spec: ModelSpec, base: str, temperature: float, reference: float) -> float:
    """Difference in the regressor ``base`` between a day at T and a day at the reference."""
    if spec.form is FormKind.POLYNOMIAL:
        for m in range(1, spec.order + 1):
            if base == poly_column(m):
                return float(temperature**m - reference**m)
        return 0.0
    if spec.form is FormKind.BINS:
        return float(base == _bin_of(spec.bin_edges, temperature)) - float(
            base == _bin_of(spec.bin_edges, reference)
        )
    if spec.form is FormKind.DEGREE_DAYS:
        if base == hdd_column(spec.hdd_threshold):
            thr = spec.hdd_threshold
            return max(0.0, thr - temperature) - max(0.0, thr - reference)
        if base == cdd_column(spec.cdd_threshold):
            thr = spec.cdd_threshold
            return max(0.0, temperature - thr) - max(0.0, reference - thr)
        return 0.0
    raise ValidationError(
        "Response functions are not defined for the interacted-average form",
        suggestion="Use fit_alternative_formulation for marginal effects",
    )


def response_vector(
    fit: FitResult,
    spec: ModelSpec,
    temperature: float,
    reference: float,
    lags: int | None = None,
    group: str | None = None,
) -> np.ndarray:
    """Linear-combination weights c such that effect = c . beta."""
    lags = spec.n_lags if lags is None else lags
    if not 0 <= lags <= spec.n_lags:
        raise ValidationError(
            f"lags must be between 0 and {spec.n_lags}, got {lags}",
            details={"lags": lags, "n_lags": spec.n_lags},
        )
    if spec.is_interacted and group not in ("low", "high"):
        raise ValidationError(
            "Interacted fits need group='low' or group='high'",
            details={"group": group},
        )
    if not spec.is_interacted and group is not None:
        raise ValidationError("group applies only to income-interacted fits", details={"group": group})

    weights = np.zeros(len(fit.coef_names))
    bases: set[str] = set()
    for i, name in enumerate(fit.coef_names):
        term = parse_term(name, spec.outcome)
        if term.family != TEMPERATURE or term.lag > lags or term.group != group:
            continue
        bases.add(term.base)
        weights[i] = _base_weight(spec, term.base, temperature, reference)
    if spec.form is FormKind.BINS:
        _check_bins_identified(spec, bases, temperature, reference)
    return weights


def _check_bins_identified(spec: ModelSpec, bases: set[str], temperature: float, reference: float) -> None:
    omitted = temp_bin_columns(spec.bin_edges)[spec.omitted_bin]
    for t in (temperature, reference):
        name = _bin_of(spec.bin_edges, t)
        if name != omitted and name not in bases:
            raise ValidationError(
                f"Bin {name} holding {t} degC has no coefficient; no sample day fell in it",
                code=BIN_NOT_IDENTIFIED,
                details={"temperature": t, "bin": name},
                suggestion="Use coarser bins or evaluate at a temperature the sample covers",
            )


def _check_support(temperature: float, defaults: EstimationDefaults) -> None:
    if not defaults.support_min <= temperature <= defaults.support_max:
        raise ValidationError(
            f"Temperature {temperature} is outside the support "
            f"[{defaults.support_min}, {defaults.support_max}]",
            code="OUT_OF_SUPPORT",
            details={"temperature": temperature},
        )


def response_at(
    fit: FitResult,
    spec: ModelSpec,
    temperature: float,
    reference: float,
    lags: int | None = None,
    group: str | None = None,
    defaults: EstimationDefaults | None = None,
) -> ResponseEval:
    """Cumulative effect through ``lags`` with a delta-method standard error.

    Temperatures in the omitted bin contribute zero.

    Raises:
        ValidationError: If the temperature is outside the support or falls
            in a bin the fit could not identify.
    """
    defaults = defaults or EstimationDefaults()
    _check_support(temperature, defaults)
    c = response_vector(fit, spec, temperature, reference, lags, group)
    effect = float(c @ fit.coefficients)
    variance = float(c @ fit.vcov @ c)
    return ResponseEval(
        temperature=temperature,
        reference=reference,
        effect=effect,
        std_err=float(np.sqrt(max(variance, 0.0))),
        n_lags_included=spec.n_lags if lags is None else lags,
        group=group,
    )


def marginal_warming_rate(
    fit: FitResult,
    spec: ModelSpec,
    eval_temperature: float,
    reference: float,
    lags: int | None = None,
    group: str | None = None,
    defaults: EstimationDefaults | None = None,
) -> float:
    """Annual growth change in percent per degree C: effect * 365 / (T - reference)."""
    if eval_temperature == reference:
        raise ValidationError("eval_temperature must differ from reference")
    result = response_at(fit, spec, eval_temperature, reference, lags, group, defaults)
    return result.effect * DAYS_PER_YEAR / (eval_temperature - reference)


def response_curve(
    fit: FitResult,
    spec: ModelSpec,
    temperatures: Sequence[float],
    reference: float,
    lags: int | None = None,
    level: float = 0.95,
    defaults: EstimationDefaults | None = None,
) -> pd.DataFrame:
    """Plot-ready table of effects with confidence bands.

    Interacted fits return one block of rows per income group. Temperatures
    in bins the fit could not identify get NaN effects.
    """
    z = float(stats.norm.ppf(0.5 + level / 2))
    groups: list[str | None] = ["low", "high"] if spec.is_interacted else [None]
    rows = []
    skipped: set[float] = set()
    for group in groups:
        for t in temperatures:
            try:
                r = response_at(fit, spec, float(t), reference, lags, group, defaults)
                effect, std_err = r.effect, r.std_err
            except ValidationError as e:
                if e.code != BIN_NOT_IDENTIFIED:
                    raise
                skipped.add(float(t))
                effect = std_err = float("nan")
            rows.append(
                {
                    "group": group or "all",
                    "temperature": float(t),
                    "effect": effect,
                    "std_err": std_err,
                    "lower": effect - z * std_err,
                    "upper": effect + z * std_err,
                }
            )
    if skipped:
        logger.warning("No identified bin for temperatures %s; effects left as NaN", sorted(skipped))
    return pd.DataFrame(rows)
