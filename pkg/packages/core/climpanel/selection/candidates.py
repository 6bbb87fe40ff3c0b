"""Candidate bin layouts for the binned temperature specification."""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from climpanel.errors import InvalidBinsError
from climpanel.estimation.spec import ModelSpec
from climpanel.utils.io import read_csv
from climpanel.weather.regressors import format_edge

PIVOT_TEMPERATURE = 26.0
SUPPORT = (13.0, 38.0)


@dataclass(frozen=True, order=True)
class CandidateBinConfig:
    """Bins of width ``interval`` anchored so that [lower_edge, lower_edge + interval) is omitted."""

    lower_edge: float
    interval: float

    def __post_init__(self) -> None:
        if self.interval <= 0:
            raise InvalidBinsError(
                f"Bin interval must be positive, got {self.interval}",
                details={"interval": self.interval},
            )

    @property
    def id(self) -> str:
        return f"{format_edge(self.lower_edge)}_{format_edge(self.interval)}"

    @property
    def omitted(self) -> tuple[float, float]:
        return self.lower_edge, self.lower_edge + self.interval

    def covers(self, temperature: float) -> bool:
        low, high = self.omitted
        return low <= temperature < high

    def edges(self, support: tuple[float, float] = SUPPORT) -> tuple[float, ...]:
        """Edges lower_edge + k*interval that fall inside ``support``."""
        lo, hi = support
        k_min = math.ceil((lo - self.lower_edge) / self.interval - 1e-9)
        k_max = math.floor((hi - self.lower_edge) / self.interval + 1e-9)
        edges = self.lower_edge + self.interval * np.arange(k_min, k_max + 1)
        return tuple(float(round(e, 9)) for e in edges)

    def omitted_index(self, support: tuple[float, float] = SUPPORT) -> int:
        edges = self.edges(support)
        if self.lower_edge not in edges or self.lower_edge + self.interval not in edges:
            raise InvalidBinsError(
                f"Omitted bin {self.omitted} falls outside the support {support}",
                details={"candidate": self.id},
            )
        # bin 0 is open below, so [edges[i], edges[i+1]) is bin i + 1
        return edges.index(self.lower_edge) + 1

    def to_spec(
        self,
        base: ModelSpec | None = None,
        support: tuple[float, float] = SUPPORT,
        pivot: float | None = PIVOT_TEMPERATURE,
    ) -> ModelSpec:
        """Binned spec with this candidate's edges; other fields follow ``base``."""
        if pivot is not None and not self.covers(pivot):
            raise InvalidBinsError(
                f"Candidate {self.id} does not cover the pivot temperature {pivot}",
                details={"candidate": self.id, "pivot": pivot},
            )
        base = base or ModelSpec.bins()
        return ModelSpec.bins(
            edges=self.edges(support),
            omitted_bin=self.omitted_index(support),
            **{
                k: getattr(base, k)
                for k in (
                    "n_lags",
                    "interaction",
                    "fixed_effects",
                    "trends",
                    "precip_control",
                    "precip_omitted_bin",
                    "outcome",
                )
            },
            name=f"bins_{self.id}",
        )


DEFAULT_CANDIDATES = (
    CandidateBinConfig(23.0, 4.0),
    CandidateBinConfig(23.0, 5.0),
    CandidateBinConfig(24.0, 3.0),
    CandidateBinConfig(24.0, 4.0),
    CandidateBinConfig(24.0, 5.0),
    CandidateBinConfig(25.0, 2.0),
    CandidateBinConfig(25.0, 3.0),
    CandidateBinConfig(25.0, 4.0),
    CandidateBinConfig(26.0, 1.0),
    CandidateBinConfig(26.0, 2.0),
    CandidateBinConfig(26.0, 3.0),
)


def load_candidates(path: Path) -> list[CandidateBinConfig]:
    """Read candidates.csv (lower_edge,interval)."""
    frame = read_csv(Path(path), ["lower_edge", "interval"], "Candidates")
    return [
        CandidateBinConfig(float(row.lower_edge), float(row.interval))
        for row in frame.itertuples(index=False)
    ]
