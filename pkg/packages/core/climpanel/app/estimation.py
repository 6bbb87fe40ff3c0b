"""Model fitting service functions."""

from __future__ import annotations

from pathlib import Path

import numpy as np

from climpanel.app import resolve_spec
from climpanel.runlog import log_run
from climpanel.schemas.estimation import FitRequest, FitResponse
from climpanel.utils.config import Config
from climpanel.utils.io import write_csv


def run_fit(config: Config, request: FitRequest) -> FitResponse:
    """Fit a spec on a panel and write fit.json, coefficients.csv and spec.cfg.

    Polynomial, bin and degree-day fits also get response_curve.csv over
    the response support; the interacted-average form gets
    marginal_effects.csv instead.

    Raises:
        ValidationError: If the panel lacks required columns or rows.
        NumericalError: If the design is collinear or clustering degenerate.
    """
    from climpanel.estimation import (
        FormKind,
        fit,
        load_panel,
        marginal_effects,
        response_curve,
        save_fit,
        save_model_spec,
    )

    panel = load_panel(Path(request.panel))
    spec = resolve_spec(request.spec, request.variant)
    result = fit(spec, panel, config.estimation)

    out_dir = Path(request.out_dir)
    outputs = {
        "fit": out_dir / "fit.json",
        "coefficients": out_dir / "coefficients.csv",
        "spec": out_dir / "spec.cfg",
    }
    save_fit(result, outputs["fit"])
    write_csv(result.coefficient_table().rename_axis("name").reset_index(), outputs["coefficients"])
    save_model_spec(spec, outputs["spec"])

    if spec.form is FormKind.INTERACTED_AVERAGE:
        outputs["marginal_effects"] = out_dir / "marginal_effects.csv"
        write_csv(marginal_effects(result), outputs["marginal_effects"])
    else:
        defaults = config.estimation
        grid = np.arange(defaults.support_min, defaults.support_max + 1e-9, request.curve_step)
        outputs["response_curve"] = out_dir / "response_curve.csv"
        curve = response_curve(result, spec, grid.tolist(), request.reference, defaults=defaults)
        write_csv(curve, outputs["response_curve"])

    log_run(
        "fit",
        {"spec": spec.name, "n_obs": result.n_obs, "out_dir": str(out_dir)},
        log_dir=config.log_dir,
    )
    return FitResponse.from_domain(result, outputs)
