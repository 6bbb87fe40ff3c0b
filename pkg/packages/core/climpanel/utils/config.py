"""Configuration management for climpanel."""

import os
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

from dotenv import load_dotenv


class LagStartup(Enum):
    """How lag years before the projection horizon are filled."""

    PROJECTED = "projected"
    BASELINE = "baseline"


class SwitchingReference(Enum):
    """Which projected path defines the cross-province median for regime switching."""

    WITH_CLIMATE = "with_climate"
    WITHOUT_CLIMATE = "without_climate"


class InitialLevels(Enum):
    """Starting output-per-capita level of each province."""

    UNIT = "unit"
    OBSERVED = "observed"


@dataclass
class EstimationDefaults:
    """Numerical tolerances for panel estimation.

    These can be overridden per run via environment variables.
    """

    absorb_tol: float = 1e-10
    max_sweeps: int = 10_000
    rank_tol: float = 1e-10
    support_min: float = 11.0
    support_max: float = 41.0


@dataclass
class AggregationDefaults:
    """Regressor schema used by the aggregate command."""

    max_order: int = 7
    # Fine 1 degree C bins; coarser bins are sums of these
    temp_bin_edges: list[float] = field(default_factory=lambda: [float(e) for e in range(0, 46)])
    degree_day_thresholds: list[tuple[float, float]] = field(default_factory=lambda: [(23.0, 28.0)])
    precip_bin_edges: list[float] = field(default_factory=lambda: [0.0, 10.0, 20.0, 30.0, 40.0])


@dataclass
class ProjectionDefaults:
    """Default windows and sizes for projection runs."""

    draws: int = 1000
    seed: int = 20240101
    baseline_window: tuple[int, int] = (2003, 2022)
    bias_window: tuple[int, int] = (2018, 2022)
    start_year: int = 2023
    end_year: int = 2090
    lag_startup: LagStartup = LagStartup.PROJECTED
    switching_reference: SwitchingReference = SwitchingReference.WITH_CLIMATE
    initial_levels: InitialLevels = InitialLevels.UNIT


@dataclass
class Config:
    """Application configuration."""

    data_dir: Path
    log_dir: Path
    estimation: EstimationDefaults = field(default_factory=EstimationDefaults)
    aggregation: AggregationDefaults = field(default_factory=AggregationDefaults)
    projection: ProjectionDefaults = field(default_factory=ProjectionDefaults)


def _window(value: str | None, default: tuple[int, int]) -> tuple[int, int]:
    if not value:
        return default
    start, _, end = value.partition("-")
    return int(start), int(end)


def load_config() -> Config:
    """Load configuration.

    Reads .env files from the project root, the working directory and
    ~/.climpanel, then applies CLIMPANEL_* environment overrides.

    Returns:
        Config object with loaded settings.
    """
    from climpanel.utils.paths import get_data_dir, get_log_dir, get_project_root

    for candidate in [
        get_project_root() / ".env",
        Path.cwd() / ".env",
        Path.home() / ".climpanel" / ".env",
    ]:
        if candidate.is_file():
            load_dotenv(candidate)

    estimation = EstimationDefaults(
        absorb_tol=float(os.getenv("CLIMPANEL_ABSORB_TOL", "1e-10")),
        max_sweeps=int(os.getenv("CLIMPANEL_MAX_SWEEPS", "10000")),
        rank_tol=float(os.getenv("CLIMPANEL_RANK_TOL", "1e-10")),
        support_min=float(os.getenv("CLIMPANEL_SUPPORT_MIN", "11")),
        support_max=float(os.getenv("CLIMPANEL_SUPPORT_MAX", "41")),
    )

    defaults = ProjectionDefaults()
    projection = ProjectionDefaults(
        draws=int(os.getenv("CLIMPANEL_DRAWS", str(defaults.draws))),
        seed=int(os.getenv("CLIMPANEL_SEED", str(defaults.seed))),
        baseline_window=_window(os.getenv("CLIMPANEL_BASELINE_WINDOW"), defaults.baseline_window),
        bias_window=_window(os.getenv("CLIMPANEL_BIAS_WINDOW"), defaults.bias_window),
        start_year=int(os.getenv("CLIMPANEL_START_YEAR", str(defaults.start_year))),
        end_year=int(os.getenv("CLIMPANEL_END_YEAR", str(defaults.end_year))),
        lag_startup=LagStartup(os.getenv("CLIMPANEL_LAG_STARTUP", defaults.lag_startup.value)),
        switching_reference=SwitchingReference(
            os.getenv("CLIMPANEL_SWITCHING_REFERENCE", defaults.switching_reference.value)
        ),
        initial_levels=InitialLevels(
            os.getenv("CLIMPANEL_INITIAL_LEVELS", defaults.initial_levels.value)
        ),
    )

    return Config(
        data_dir=get_data_dir(),
        log_dir=get_log_dir(),
        estimation=estimation,
        projection=projection,
    )
