"""Synthetic fixtures for desk-scale runs of the whole pipeline.

Growth follows g = b1*T + b2*T2 + rho*R + a_p + a_y + e, where T and T2 are
the annual polynomial temperature terms, R is annual rainfall and e is AR(1)
within each province. Regressors are computed from the generated hourly grid
with the same kernels as the aggregate step, so a fit on the emitted panel
sees exactly the DGP's inputs.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np
import pandas as pd
import yaml

from climpanel.aggregation.shares import REGIONS
from climpanel.errors import ValidationError
from climpanel.estimation.spec import ModelSpec, save_model_spec
from climpanel.utils.io import atomic_write, write_csv
from climpanel.utils.logging import get_logger
from climpanel.weather.aggregate import regressors_from_arrays
from climpanel.weather.regressors import PRECIP, RegressorSchema, poly_column
from climpanel.weather.weights import (
    WeightMap,
    population_weights_from_counts,
    weights_to_frames,
)

logger = get_logger("climpanel.synthetic")

HOURS = np.arange(24)


@dataclass
class SyntheticSpec:
    """Size, truth and randomness of a synthetic fixture set."""

    n_provinces: int = 5
    n_years: int = 30
    end_year: int = 2022
    beta1: float = 0.05
    beta2: float = -0.001
    rho: float = 0.0
    fe_scale: float = 1.0
    noise_sd: float = 0.5
    noise_ar: float = 0.3
    seed: int = 0
    n_lags: int = 0
    cells_per_province: int = 2
    center_climate: bool = True
    models: tuple[str, ...] = ("model_a", "model_b")
    rcps: tuple[str, ...] = ("rcp45", "rcp85")
    warming: dict[str, float] = field(default_factory=lambda: {"rcp45": 1.5, "rcp85": 3.5})
    projection_end: int = 2090
    model_bias: float = 0.3

    def __post_init__(self) -> None:
        if self.n_provinces < 2:
            raise ValidationError(f"n_provinces must be at least 2, got {self.n_provinces}")
        if self.n_years < self.n_lags + 2:
            raise ValidationError(
                f"n_years must be at least n_lags + 2 ({self.n_lags + 2}), got {self.n_years}"
            )
        if self.cells_per_province < 1:
            raise ValidationError("cells_per_province must be at least 1")
        if self.noise_sd < 0 or self.fe_scale < 0:
            raise ValidationError("noise_sd and fe_scale must be non-negative")
        self.models = tuple(self.models)
        self.rcps = tuple(self.rcps)

    @property
    def years(self) -> np.ndarray:
        return np.arange(self.end_year - self.n_years + 1, self.end_year + 1)

    @property
    def provinces(self) -> list[str]:
        return [f"P{i:02d}" for i in range(self.n_provinces)]


@dataclass
class SyntheticData:
    hourly: pd.DataFrame
    daily: pd.DataFrame
    weights: WeightMap
    panel: pd.DataFrame
    climate: dict[tuple[str, str], pd.DataFrame]
    growth: pd.DataFrame
    shares: pd.DataFrame


@dataclass
class _Climate:
    """Per-province climate parameters."""

    mean: np.ndarray
    cell_offsets: np.ndarray


def _dates(start_year: int, end_year: int) -> np.ndarray:
    return np.arange(
        np.datetime64(f"{start_year}-01-01"), np.datetime64(f"{end_year + 1}-01-01"), dtype="datetime64[D]"
    )


def _hourly_temps(
    rng: np.random.Generator, climate: _Climate, p: int, dates: np.ndarray, anomaly: np.ndarray
) -> np.ndarray:
    """Hourly temperatures (cells, days, 24) rounded to 0.01 degC."""
    doy = (dates - dates.astype("datetime64[Y]")).astype(int)
    seasonal = 2.5 * np.sin(2 * np.pi * (doy - 105) / 365.25)
    diurnal = 4.0 * np.sin(2 * np.pi * (HOURS - 9) / 24)
    base = climate.mean[p] + anomaly + seasonal
    n_cells = climate.cell_offsets.shape[1]
    noise = rng.normal(0.0, 1.5, size=(n_cells, dates.size, 24))
    temps = (
        base[None, :, None]
        + climate.cell_offsets[p][:, None, None]
        + diurnal[None, None, :]
        + noise
    )
    return np.round(np.clip(temps, -5.0, 50.0), 2)


def _daily_rain(rng: np.random.Generator, n_cells: int, n_days: int) -> np.ndarray:
    wet = rng.random((n_cells, n_days)) < 0.35
    return np.round(wet * rng.gamma(0.9, 14.0, size=(n_cells, n_days)), 1)


def _year_anomalies(rng: np.random.Generator, dates: np.ndarray, n_provinces: int) -> np.ndarray:
    """Daily temperature anomaly per province: common plus own year shocks."""
    years = dates.astype("datetime64[Y]").astype(int) + 1970
    unique_years, index = np.unique(years, return_inverse=True)
    common = rng.normal(0.0, 0.4, size=unique_years.size)
    own = rng.normal(0.0, 0.6, size=(n_provinces, unique_years.size))
    return (common[None, :] + own)[:, index]


def _weight_map(spec: SyntheticSpec, rng: np.random.Generator) -> tuple[WeightMap, pd.DataFrame]:
    """One polygon per cell; polygon populations observed in two census years."""
    cells: dict[str, list[tuple[str, float]]] = {}
    counts = []
    for p, province in enumerate(spec.provinces):
        for k in range(spec.cells_per_province):
            polygon = f"{province}_{k}"
            cells[polygon] = [(f"c{p:02d}{k}", 1.0)]
            base = float(rng.uniform(50_000, 500_000))
            counts.append((province, polygon, 2000, base))
            counts.append((province, polygon, 2010, base * float(rng.uniform(0.9, 1.2))))
    frame = pd.DataFrame(counts, columns=["province_id", "polygon_id", "year", "population"])
    weights = WeightMap(cell_weights=cells, population_weights=population_weights_from_counts(frame))
    weights.validate()
    return weights, frame


def _regressor_rows(
    province: str,
    years: np.ndarray,
    dates: np.ndarray,
    weights: WeightMap,
    temps: np.ndarray,
    rain: np.ndarray,
    schema: RegressorSchema,
) -> list[dict[str, object]]:
    day_years = dates.astype("datetime64[Y]").astype(int) + 1970
    rows = []
    for year in years:
        mask = day_years == year
        _, w = weights.cell_weights_for(province, int(year))
        regressors = regressors_from_arrays(province, int(year), w, temps[:, mask], rain[:, mask], schema)
        rows.append(regressors.to_row(schema))
    return rows


def generate_synthetic_panel(spec: SyntheticSpec, schema: RegressorSchema | None = None) -> SyntheticData:
    """Generate every fixture table in memory, deterministically from ``spec.seed``."""
    schema = schema or RegressorSchema()
    grid_seq, growth_seq, climate_seq, meta_seq = np.random.SeedSequence(spec.seed).spawn(4)
    grid_rng = np.random.default_rng(grid_seq)
    growth_rng = np.random.default_rng(growth_seq)
    meta_rng = np.random.default_rng(meta_seq)

    provinces = spec.provinces
    years = spec.years
    dates = _dates(int(years[0]), int(years[-1]))
    climate = _Climate(
        mean=meta_rng.uniform(24.0, 29.0, size=spec.n_provinces),
        cell_offsets=meta_rng.normal(0.0, 0.5, size=(spec.n_provinces, spec.cells_per_province)),
    )
    weights, counts = _weight_map(spec, meta_rng)
    anomalies = _year_anomalies(grid_rng, dates, spec.n_provinces)

    hourly_parts, daily_parts, rows = [], [], []
    stamps = (dates[:, None] + HOURS[None, :].astype("timedelta64[h]")).ravel()
    stamp_text = np.char.add(np.datetime_as_string(stamps, unit="s"), "Z")
    date_text = np.datetime_as_string(dates, unit="D")
    for p, province in enumerate(provinces):
        temps = _hourly_temps(grid_rng, climate, p, dates, anomalies[p])
        rain = _daily_rain(grid_rng, spec.cells_per_province, dates.size)
        for k in range(spec.cells_per_province):
            cell_id = f"c{p:02d}{k}"
            hourly_parts.append(
                pd.DataFrame(
                    {
                        "cell_id": cell_id,
                        "lat": round(5.0 + p * 0.5, 4),
                        "lon": round(98.0 + k * 0.25, 4),
                        "timestamp_utc": stamp_text,
                        "temp_c": temps[k].ravel(),
                    }
                )
            )
            daily_parts.append(pd.DataFrame({"cell_id": cell_id, "date": date_text, "precip_mm": rain[k]}))
        rows.extend(_regressor_rows(province, years, dates, weights, temps, rain, schema))

    panel = pd.DataFrame(rows, columns=["province_id", "year", *schema.columns()])
    panel = _attach_outcomes(panel, spec, growth_rng)
    climate_frames = _projected_climate(spec, climate, weights, schema, climate_seq)
    logger.info(
        "Generated synthetic panel: %d provinces x %d years, %d climate scenarios",
        spec.n_provinces, spec.n_years, len(climate_frames),
    )
    return SyntheticData(
        hourly=pd.concat(hourly_parts, ignore_index=True),
        daily=pd.concat(daily_parts, ignore_index=True),
        weights=weights,
        panel=panel,
        climate=climate_frames,
        growth=_growth_paths(spec),
        shares=_shares(spec, counts),
    )


def _attach_outcomes(panel: pd.DataFrame, spec: SyntheticSpec, rng: np.random.Generator) -> pd.DataFrame:
    t1 = panel[poly_column(1)].to_numpy(dtype=float)
    t2 = panel[poly_column(2)].to_numpy(dtype=float)
    rain = panel[PRECIP].to_numpy(dtype=float)
    climate_part = spec.beta1 * t1 + spec.beta2 * t2 + spec.rho * rain

    n_p, n_y = spec.n_provinces, spec.n_years
    province_fe = spec.fe_scale * rng.normal(3.0, 1.0, size=n_p)
    year_fe = spec.fe_scale * rng.normal(0.0, 1.0, size=n_y)
    shocks = rng.normal(0.0, 1.0, size=(n_p, n_y))
    noise = np.zeros((n_p, n_y))
    for j in range(n_y):
        noise[:, j] = spec.noise_sd * shocks[:, j] + (spec.noise_ar * noise[:, j - 1] if j else 0.0)

    climate_grid = climate_part.reshape(n_p, n_y)
    if spec.center_climate:
        province_fe = province_fe - climate_grid.mean(axis=1)
    growth = climate_grid + province_fe[:, None] + year_fe[None, :] + noise

    income0 = np.exp(rng.normal(np.log(100_000.0), 0.5, size=n_p))
    gpp_pc = income0[:, None] * np.exp(np.cumsum(growth, axis=1) / 100.0)
    sector = 1.5 * (climate_grid + province_fe[:, None]) + year_fe[None, :] + 2.0 * noise

    out = panel.copy()
    out["growth"] = growth.ravel()
    out["region_id"] = [REGIONS[p % len(REGIONS)] for p in range(n_p) for _ in range(n_y)]
    out["gpp_pc"] = gpp_pc.ravel()
    out["sector_agriculture"] = sector.ravel()
    leading = ["province_id", "year", "growth", "region_id", "gpp_pc", "sector_agriculture"]
    return out[leading + [c for c in out.columns if c not in leading]]


def _projected_climate(
    spec: SyntheticSpec,
    climate: _Climate,
    weights: WeightMap,
    schema: RegressorSchema,
    seq: np.random.SeedSequence,
) -> dict[tuple[str, str], pd.DataFrame]:
    """Regressors from simulated future weather: observed DGP plus warming plus model bias."""
    first = min(2018, spec.end_year - 4)
    years = np.arange(first, spec.projection_end + 1)
    dates = _dates(first, spec.projection_end)
    day_years = dates.astype("datetime64[Y]").astype(int) + 1970
    n_models = len(spec.models)
    frames: dict[tuple[str, str], pd.DataFrame] = {}
    streams = seq.spawn(len(spec.rcps) * n_models)
    for r, rcp in enumerate(spec.rcps):
        total = spec.warming.get(rcp, 0.0)
        ramp = total * np.clip((day_years - 2020) / (spec.projection_end - 2020), 0.0, None)
        for m, model in enumerate(spec.models):
            rng = np.random.default_rng(streams[r * n_models + m])
            bias = spec.model_bias * (m - (n_models - 1) / 2)
            anomalies = _year_anomalies(rng, dates, spec.n_provinces)
            rows = []
            for p, province in enumerate(spec.provinces):
                temps = _hourly_temps(rng, climate, p, dates, anomalies[p] + ramp + bias)
                rain = _daily_rain(rng, spec.cells_per_province, dates.size)
                rows.extend(_regressor_rows(province, years, dates, weights, temps, rain, schema))
            frames[(rcp, model)] = pd.DataFrame(rows, columns=["province_id", "year", *schema.columns()])
    return frames


def _growth_paths(spec: SyntheticSpec) -> pd.DataFrame:
    years = np.arange(2020, max(spec.projection_end, 2100) + 1, 5)
    rows = []
    for scenario, rate in (("ssp3", 0.015), ("ssp5", 0.03)):
        for year in years:
            rows.append((scenario, int(year), 10_000.0 * (1 + rate) ** (year - 2020)))
    return pd.DataFrame(rows, columns=["scenario", "year", "gdp_pc"])


def _shares(spec: SyntheticSpec, counts: pd.DataFrame) -> pd.DataFrame:
    latest = counts[counts["year"] == counts["year"].max()]
    totals = latest.groupby("province_id")["population"].sum()
    rows = []
    for p, province in enumerate(spec.provinces):
        for year in range(2003, 2023):
            population = float(totals[province]) * (1.005 ** (year - 2003))
            rows.append((province, REGIONS[p % len(REGIONS)], year, round(population, 3)))
    return pd.DataFrame(rows, columns=["province_id", "region_id", "year", "population"])


def generate_synthetic(spec: SyntheticSpec, out_dir: Path) -> dict[str, Path]:
    """Write a complete fixture set and a pipeline.yaml that references it.

    Returns:
        Mapping of fixture name to written path.
    """
    out_dir = Path(out_dir)
    data = generate_synthetic_panel(spec)
    paths = {
        "grid_hourly": out_dir / "grid_hourly.csv",
        "grid_daily": out_dir / "grid_daily.csv",
        "cell_weights": out_dir / "cell_weights.csv",
        "population_weights": out_dir / "population_weights.csv",
        "panel": out_dir / "panel.csv",
        "climate_dir": out_dir / "climate",
        "growth": out_dir / "growth.csv",
        "shares": out_dir / "shares.csv",
        "spec": out_dir / "spec.cfg",
        "pipeline": out_dir / "pipeline.yaml",
    }
    write_csv(data.hourly, paths["grid_hourly"], float_format="%.2f")
    write_csv(data.daily, paths["grid_daily"], float_format="%.1f")
    cells, population = weights_to_frames(data.weights)
    write_csv(cells, paths["cell_weights"])
    write_csv(population, paths["population_weights"])
    write_csv(data.panel, paths["panel"])
    for (rcp, model), frame in data.climate.items():
        write_csv(frame, paths["climate_dir"] / rcp / f"{model}.csv")
    write_csv(data.growth, paths["growth"])
    write_csv(data.shares, paths["shares"])
    save_model_spec(ModelSpec.polynomial(2, n_lags=spec.n_lags, name="synthetic"), paths["spec"])

    pipeline = {
        "grid_hourly": "grid_hourly.csv",
        "grid_daily": "grid_daily.csv",
        "cell_weights": "cell_weights.csv",
        "population_weights": "population_weights.csv",
        "panel": "panel.csv",
        "climate_dir": "climate",
        "growth": "growth.csv",
        "shares": "shares.csv",
        "spec": "spec.cfg",
        "seed": spec.seed,
        "draws": 50,
        "rcps": list(spec.rcps),
        "growth_kinds": ["baseline"],
        "bias_correct": True,
        "out_dir": "out",
        "synthetic": {k: v for k, v in asdict(spec).items() if k not in ("models", "rcps", "warming")},
    }
    atomic_write(paths["pipeline"], lambda handle: yaml.safe_dump(pipeline, handle, sort_keys=False))
    logger.info("Wrote synthetic fixtures to %s", out_dir)
    return paths
