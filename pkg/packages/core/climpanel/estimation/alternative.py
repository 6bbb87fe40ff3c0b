"""Temperature interacted with province climate (and income) averages.

g = b1*T + b2*T*Tbar + b3*T*Ybar + r1*R + r2*R*Rbar + r3*R*Ybar + FE

The marginal effect of a day's temperature for a province whose average
temperature is T* is b1 + b2*T*.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
import pandas as pd

from climpanel.estimation.fit import FitResult, fit
from climpanel.estimation.panel import PanelDataset
from climpanel.estimation.spec import IncomeKind, ModelSpec
from climpanel.utils.config import EstimationDefaults

MARGINAL_GRID = (15.0, 20.0, 25.0, 30.0, 35.0, 40.0)


@dataclass
class AlternativeFormulationResult:
    fit: FitResult
    marginal_effects: pd.DataFrame


def marginal_effects(fit_result: FitResult, grid: Sequence[float] = MARGINAL_GRID) -> pd.DataFrame:
    """b1 + b2*T* with delta-method standard errors over ``grid``."""
    names = fit_result.coef_names
    i1, i2 = names.index("temp_p1"), names.index("temp_p1_x_tbar")
    rows = []
    for t_bar in grid:
        c = np.zeros(len(names))
        c[i1], c[i2] = 1.0, float(t_bar)
        variance = float(c @ fit_result.vcov @ c)
        rows.append(
            {
                "t_bar": float(t_bar),
                "effect": float(c @ fit_result.coefficients),
                "std_err": float(np.sqrt(max(variance, 0.0))),
            }
        )
    return pd.DataFrame(rows)


def fit_alternative_formulation(
    data: PanelDataset,
    income_kind: IncomeKind = IncomeKind.NONE,
    grid: Sequence[float] = MARGINAL_GRID,
    defaults: EstimationDefaults | None = None,
    spec: ModelSpec | None = None,
) -> AlternativeFormulationResult:
    """Fit the interacted-average form and evaluate marginal effects over ``grid``."""
    spec = spec or ModelSpec.interacted_average(income_kind, name=f"alternative_{income_kind.value}")
    result = fit(spec, data, defaults)
    return AlternativeFormulationResult(fit=result, marginal_effects=marginal_effects(result, grid))
