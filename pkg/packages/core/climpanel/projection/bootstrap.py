"""Province block bootstrap of regression coefficients.

Each draw samples provinces with replacement, keeps every sampled
province's full time series, relabels repeated picks as distinct clusters
and refits. Row 0 of the result holds the point estimate.
"""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass

import numpy as np

from climpanel.errors import NumericalError, TooFewObservationsError, ValidationError
from climpanel.estimation.design import build_design
from climpanel.estimation.fit import FitResult, fit_design
from climpanel.estimation.panel import PanelDataset
from climpanel.estimation.spec import ModelSpec
from climpanel.utils.config import EstimationDefaults
from climpanel.utils.logging import get_logger

logger = get_logger("climpanel.projection")

IndexSampler = Callable[[np.random.Generator, int], np.ndarray]
MAX_REDRAWS = 1000


def sample_provinces(rng: np.random.Generator, n_provinces: int) -> np.ndarray:
    return rng.integers(0, n_provinces, size=n_provinces)


@dataclass
class BootstrapDraws:
    """Coefficient draws; row 0 is the point estimate."""

    point: FitResult
    coefficients: np.ndarray
    seed: int
    redraws: int = 0

    @property
    def n_draws(self) -> int:
        return self.coefficients.shape[0] - 1

    @property
    def coef_names(self) -> tuple[str, ...]:
        return self.point.coef_names

    def fit_for(self, draw: int) -> FitResult:
        return self.point.with_coefficients(self.coefficients[draw])

    def std_errors(self) -> np.ndarray:
        """Standard deviation of the bootstrap draws (row 0 excluded)."""
        return self.coefficients[1:].std(axis=0, ddof=1)


def block_bootstrap(
    panel: PanelDataset,
    spec: ModelSpec,
    n_draws: int = 1000,
    seed: int = 0,
    defaults: EstimationDefaults | None = None,
    index_sampler: IndexSampler = sample_provinces,
) -> BootstrapDraws:
    """Refit ``spec`` on ``n_draws`` province resamples.

    Rank-deficient or otherwise degenerate resamples are redrawn; the
    number of redraws is logged and returned.

    Raises:
        ValidationError: If ``n_draws`` < 1.
        NumericalError: If redraws exceed the retry limit.
    """
    if n_draws < 1:
        raise ValidationError(f"n_draws must be at least 1, got {n_draws}")
    design = build_design(spec, panel)
    point = fit_design(design, defaults)

    provinces = design.rows["province_id"].astype(str).to_numpy()
    names = sorted(set(provinces))
    blocks = [np.flatnonzero(provinces == p) for p in names]

    rng = np.random.default_rng(seed)
    draws = np.empty((n_draws + 1, len(point.coef_names)))
    draws[0] = point.coefficients
    redraws = 0
    for d in range(1, n_draws + 1):
        while True:
            picks = np.asarray(index_sampler(rng, len(names)))
            positions = np.concatenate([blocks[k] for k in picks])
            labels = np.concatenate(
                [np.full(blocks[k].size, f"{names[k]}#{i}") for i, k in enumerate(picks)]
            )
            try:
                refit = fit_design(
                    design.take(positions, labels),
                    defaults,
                    compute_vcov=False,
                    recover_effects=False,
                )
            except (NumericalError, TooFewObservationsError) as e:
                redraws += 1
                if redraws > MAX_REDRAWS:
                    raise NumericalError(
                        f"Bootstrap exceeded {MAX_REDRAWS} redraws",
                        details={"last_error": e.code},
                    ) from e
                continue
            draws[d] = refit.coefficients
            break

    if redraws:
        logger.info("Bootstrap %s: %d degenerate resamples redrawn", spec.name, redraws)
    logger.debug("Bootstrap %s: %d draws with seed %d", spec.name, n_draws, seed)
    return BootstrapDraws(point=point, coefficients=draws, seed=seed, redraws=redraws)
