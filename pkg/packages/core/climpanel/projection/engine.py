"""Climate-impact projection of province growth and output-per-capita levels.

For each province and year the projected growth is the no-climate-change
rate plus delta, the fitted response to projected annual regressors minus
the response to the observed baseline average. Levels compound from 1.0 and
gpp_ratio is the with-climate level over the without-climate level.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Any

import numpy as np
import pandas as pd

from climpanel.errors import ConfigurationError, MissingBaselineError, NumericalError, ValidationError
from climpanel.estimation.design import TEMPERATURE, parse_term
from climpanel.estimation.fit import FitResult
from climpanel.estimation.spec import FormKind, ModelSpec
from climpanel.projection.climate import ClimateScenarioData
from climpanel.projection.growth import GrowthScenario
from climpanel.utils.config import InitialLevels, LagStartup, ProjectionDefaults, SwitchingReference

LOW, HIGH = "low", "high"


@dataclass(frozen=True)
class ProjectionOptions:
    start_year: int = 2023
    end_year: int = 2090
    baseline_window: tuple[int, int] = (2003, 2022)
    bias_window: tuple[int, int] = (2018, 2022)
    bias_correct: bool = False
    regime_switching: bool = False
    lag_startup: LagStartup = LagStartup.PROJECTED
    switching_reference: SwitchingReference = SwitchingReference.WITH_CLIMATE
    initial_levels: InitialLevels = InitialLevels.UNIT

    @classmethod
    def from_defaults(cls, defaults: ProjectionDefaults, **overrides: Any) -> ProjectionOptions:
        options = cls(
            start_year=defaults.start_year,
            end_year=defaults.end_year,
            baseline_window=defaults.baseline_window,
            bias_window=defaults.bias_window,
            lag_startup=defaults.lag_startup,
            switching_reference=defaults.switching_reference,
            initial_levels=defaults.initial_levels,
        )
        return replace(options, **overrides)

    @property
    def years(self) -> np.ndarray:
        if self.end_year < self.start_year:
            raise ValidationError(f"end_year {self.end_year} precedes start_year {self.start_year}")
        return np.arange(self.start_year, self.end_year + 1)


@dataclass
class ResponseCoefficients:
    """Temperature coefficients arranged as (lag, regressor) per income group."""

    bases: list[str]
    n_lags: int
    sets: dict[str | None, np.ndarray]

    @classmethod
    def from_fit(cls, fit: FitResult, spec: ModelSpec) -> ResponseCoefficients:
        return cls.from_vector(fit.coef_names, fit.coefficients, spec)

    @classmethod
    def from_vector(
        cls, names: tuple[str, ...], coefficients: np.ndarray, spec: ModelSpec
    ) -> ResponseCoefficients:
        if spec.form is FormKind.INTERACTED_AVERAGE:
            raise ValidationError("Projections need a polynomial, bin or degree-day response")
        terms = [parse_term(n, spec.outcome) for n in names]
        bases: list[str] = []
        for t in terms:
            if t.family == TEMPERATURE and t.base not in bases:
                bases.append(t.base)
        groups: list[str | None] = [LOW, HIGH] if spec.is_interacted else [None]
        sets = {g: np.zeros((spec.n_lags + 1, len(bases))) for g in groups}
        for t, beta in zip(terms, coefficients):
            if t.family == TEMPERATURE:
                sets[t.group][t.lag, bases.index(t.base)] = beta
        return cls(bases=bases, n_lags=spec.n_lags, sets=sets)


@dataclass
class ClimateExposure:
    """Regressor differences, projected minus observed baseline.

    ``diff`` has shape (provinces, n_lags + years, regressors); column
    n_lags + j is projection year j. ``bias`` is the projected minus the
    observed average over the bias window, shape (provinces, regressors).
    """

    provinces: list[str]
    years: np.ndarray
    n_lags: int
    diff: np.ndarray
    bias: np.ndarray | None = None


def climate_exposure(
    climate: ClimateScenarioData,
    spec: ModelSpec,
    bases: list[str],
    options: ProjectionOptions,
    provinces: list[str] | None = None,
) -> ClimateExposure:
    """Differences in annual regressors that drive delta for every province-year.

    Raises:
        MissingBaselineError: If a baseline or bias window is empty.
        MissingDataError: If projected years are missing.
    """
    provinces = provinces or climate.provinces
    years = options.years
    n_lags = spec.n_lags
    first = options.start_year - n_lags if options.lag_startup is LagStartup.PROJECTED else options.start_year
    climate.check_coverage(provinces, first, options.end_year)

    projected = climate.projected_regressors(spec)[bases]
    baseline = climate.baseline_mean(spec, options.baseline_window, provinces)[bases].to_numpy()
    ext_years = np.arange(options.start_year - n_lags, options.end_year + 1)
    index = pd.MultiIndex.from_product([provinces, ext_years], names=["province_id", "year"])
    values = projected.reindex(index).to_numpy(dtype=float)
    diff = values.reshape(len(provinces), ext_years.size, len(bases)) - baseline[:, None, :]
    # lag years before the first covered year contribute nothing
    diff[:, ext_years < first, :] = 0.0

    bias = None
    if options.bias_correct:
        observed = climate.baseline_mean(spec, options.bias_window, provinces)[bases].to_numpy()
        simulated = climate.projected_mean(spec, options.bias_window, provinces)[bases].to_numpy()
        bias = simulated - observed
    return ClimateExposure(provinces=list(provinces), years=years, n_lags=n_lags, diff=diff, bias=bias)


def delta_matrix(coefficients: np.ndarray, exposure: ClimateExposure) -> np.ndarray:
    """delta for every (province, projection year) under one coefficient set."""
    L, n_years = exposure.n_lags, exposure.years.size
    out = np.zeros((len(exposure.provinces), n_years))
    for lag in range(L + 1):
        out += exposure.diff[:, L - lag : L - lag + n_years, :] @ coefficients[lag]
    return out


def bias_vector(coefficients: np.ndarray, exposure: ClimateExposure) -> np.ndarray:
    """Per-province bias offset: response to the projected-minus-observed window mean."""
    if exposure.bias is None:
        raise MissingBaselineError("Exposure was built without a bias window")
    return exposure.bias @ coefficients.sum(axis=0)


@dataclass
class ProjectionPaths:
    """Arrays of shape (provinces, years)."""

    provinces: list[str]
    years: np.ndarray
    g_plus: np.ndarray
    g_base: np.ndarray
    level_with: np.ndarray
    level_without: np.ndarray
    groups: np.ndarray | None = None

    @property
    def gpp_ratio(self) -> np.ndarray:
        return self.level_with / self.level_without

    def to_frame(self) -> pd.DataFrame:
        n_prov, n_years = self.g_plus.shape
        return pd.DataFrame(
            {
                "province": np.repeat(self.provinces, n_years),
                "year": np.tile(self.years, n_prov),
                "g_plus": self.g_plus.ravel(),
                "gpp_ratio": self.gpp_ratio.ravel(),
                "level_with": self.level_with.ravel(),
                "level_without": self.level_without.ravel(),
            }
        )


def _compound(initial: np.ndarray, growth: np.ndarray) -> np.ndarray:
    return initial[:, None] * np.cumprod(1.0 + growth / 100.0, axis=1)


def project_provinces(
    response: ResponseCoefficients,
    exposure: ClimateExposure,
    base_growth: np.ndarray,
    options: ProjectionOptions,
    low_income: np.ndarray | None = None,
    initial_levels: np.ndarray | None = None,
    ranking_levels: np.ndarray | None = None,
) -> ProjectionPaths:
    """Project every province jointly.

    Args:
        response: Coefficient sets (one, or low and high for interacted fits).
        exposure: Regressor differences from climate_exposure().
        base_growth: No-climate-change growth (pp), shape (provinces, years).
        options: Bias correction, regime switching and windows.
        low_income: Observed income group per province, needed for interacted fits.
        initial_levels: Output per capita in the year before the horizon
            (default 1.0).
        ranking_levels: Observed output per capita in the year before the
            horizon. Regime switching ranks provinces on these levels grown
            along the projected path; defaults to ``initial_levels``.

    Raises:
        ConfigurationError: If regime switching has no levels to rank on.
    """
    n_prov, n_years = base_growth.shape
    deltas = {}
    for group, coefs in response.sets.items():
        d = delta_matrix(coefs, exposure)
        if options.bias_correct:
            d = d - bias_vector(coefs, exposure)[:, None]
        deltas[group] = d

    start = np.ones(n_prov) if initial_levels is None else np.asarray(initial_levels, dtype=float)
    level_without = _compound(start, base_growth)
    if None in deltas:
        g_plus = base_growth + deltas[None]
        level_with = _compound(start, g_plus)
        groups = None
    else:
        if low_income is None:
            raise ValidationError("Interacted projections need each province's income group")
        low = np.asarray(low_income, dtype=bool)
        if not options.regime_switching:
            g_plus = base_growth + np.where(low[:, None], deltas[LOW], deltas[HIGH])
            level_with = _compound(start, g_plus)
            groups = np.repeat(low[:, None], n_years, axis=1)
        else:
            rank_start = ranking_levels if ranking_levels is not None else initial_levels
            if rank_start is None:
                raise ConfigurationError(
                    "Regime switching ranks provinces on output per capita but no observed levels were given",
                    suggestion="Pass ranking_levels or use observed initial levels",
                )
            g_plus, level_with, groups = _switching_paths(
                deltas, base_growth, level_without, low, start, np.asarray(rank_start, dtype=float), options
            )

    if not np.all(level_with > 0):
        raise NumericalError(
            "Projected output per capita fell to zero or below",
            details={"min_growth": float(g_plus.min())},
        )
    return ProjectionPaths(
        provinces=list(exposure.provinces),
        years=exposure.years,
        g_plus=g_plus,
        g_base=base_growth,
        level_with=level_with,
        level_without=level_without,
        groups=groups,
    )


def _switching_paths(
    deltas: dict[str | None, np.ndarray],
    base_growth: np.ndarray,
    level_without: np.ndarray,
    low_start: np.ndarray,
    start: np.ndarray,
    rank_start: np.ndarray,
    options: ProjectionOptions,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Year-by-year projection where each province uses the low-income response
    while its prior-year output per capita is below the cross-province median.

    Output per capita is ``rank_start`` compounded along the reference path,
    whatever starting level the reported paths use.
    """
    n_prov, n_years = base_growth.shape
    g_plus = np.empty_like(base_growth)
    level_with = np.empty_like(base_growth)
    groups = np.empty(base_growth.shape, dtype=bool)
    previous = start
    for j in range(n_years):
        if j == 0:
            ranking = rank_start
            # equal starting levels carry no ranking; keep the observed groups
            low = low_start if np.ptp(ranking) == 0 else ranking < np.median(ranking)
        else:
            path = level_with if options.switching_reference is SwitchingReference.WITH_CLIMATE else level_without
            ranking = rank_start * path[:, j - 1] / start
            low = ranking < np.median(ranking)
        g_plus[:, j] = base_growth[:, j] + np.where(low, deltas[LOW][:, j], deltas[HIGH][:, j])
        level_with[:, j] = previous * (1.0 + g_plus[:, j] / 100.0)
        previous = level_with[:, j]
        groups[:, j] = low
    return g_plus, level_with, groups


# =============================================================================
# Single-province operations
# =============================================================================


def _single(
    fit: FitResult, spec: ModelSpec, climate: ClimateScenarioData, province: str, options: ProjectionOptions
) -> tuple[ResponseCoefficients, ClimateExposure]:
    response = ResponseCoefficients.from_fit(fit, spec)
    exposure = climate_exposure(climate, spec, response.bases, options, provinces=[str(province)])
    return response, exposure


def _only_set(response: ResponseCoefficients, group: str | None) -> np.ndarray:
    if group not in response.sets:
        raise ValidationError(
            f"Coefficient group {group!r} not in fit",
            details={"groups": [g for g in response.sets]},
        )
    return response.sets[group]


def delta(
    fit: FitResult,
    spec: ModelSpec,
    climate: ClimateScenarioData,
    province: str,
    year: int,
    options: ProjectionOptions | None = None,
    group: str | None = None,
) -> float:
    """Differential growth effect (pp) of projected versus baseline climate."""
    options = options or ProjectionOptions()
    if not options.start_year <= year <= options.end_year:
        raise ValidationError(
            f"Year {year} is outside the projection horizon {options.start_year}-{options.end_year}",
            details={"year": year},
        )
    response, exposure = _single(fit, spec, climate, province, replace(options, bias_correct=False))
    d = delta_matrix(_only_set(response, group), exposure)
    return float(d[0, int(np.flatnonzero(exposure.years == year)[0])])


def bias_correction(
    fit: FitResult,
    spec: ModelSpec,
    climate: ClimateScenarioData,
    province: str,
    options: ProjectionOptions | None = None,
    group: str | None = None,
) -> float:
    """Constant offset h(projected window mean) - h(observed window mean)."""
    options = replace(options or ProjectionOptions(), bias_correct=True)
    response, exposure = _single(fit, spec, climate, province, options)
    return float(bias_vector(_only_set(response, group), exposure)[0])


def project_path(
    fit: FitResult,
    spec: ModelSpec,
    climate: ClimateScenarioData,
    growth: GrowthScenario,
    province: str,
    options: ProjectionOptions | None = None,
    low_income: dict[str, bool] | None = None,
    initial_levels: dict[str, float] | None = None,
    ranking_levels: dict[str, float] | None = None,
) -> pd.DataFrame:
    """Projected path of one province.

    Regime switching ranks provinces against each other, so all provinces
    in ``climate`` are projected and the requested one is returned.
    """
    options = options or ProjectionOptions()
    response = ResponseCoefficients.from_fit(fit, spec)
    provinces = climate.provinces if options.regime_switching else [str(province)]
    if str(province) not in provinces:
        raise MissingBaselineError(f"Province {province} has no projected climate")
    exposure = climate_exposure(climate, spec, response.bases, options, provinces=provinces)
    base = growth.rates(provinces, options.years.tolist())
    flags = np.array([low_income[p] for p in provinces]) if low_income is not None else None
    start = np.array([initial_levels[p] for p in provinces]) if initial_levels is not None else None
    ranking = np.array([ranking_levels[p] for p in provinces]) if ranking_levels is not None else None
    paths = project_provinces(response, exposure, base, options, flags, start, ranking)
    frame = paths.to_frame()
    return frame[frame["province"] == str(province)].reset_index(drop=True)
