"""Fixed-effects panel estimation of growth-temperature response functions."""

from climpanel.estimation.absorb import AbsorbedSystem, absorb_fixed_effects, recover_fixed_effects
from climpanel.estimation.alternative import (
    AlternativeFormulationResult,
    fit_alternative_formulation,
    marginal_effects,
)
from climpanel.estimation.covariance import cluster_robust_vcov, small_sample_factor
from climpanel.estimation.design import Design, Term, build_design, parse_term
from climpanel.estimation.fit import FitResult, fit, fit_design, fit_interacted, load_fit, save_fit
from climpanel.estimation.panel import PanelDataset, load_panel, save_panel
from climpanel.estimation.response import (
    ResponseEval,
    marginal_warming_rate,
    response_at,
    response_curve,
    response_vector,
)
from climpanel.estimation.spec import (
    FixedEffect,
    FormKind,
    IncomeKind,
    Interaction,
    ModelSpec,
    PrecipControl,
    Trend,
    load_model_spec,
    save_model_spec,
)
from climpanel.estimation.variants import (
    PROJECTION_VARIANTS,
    ROBUSTNESS_VARIANTS,
    projection_spec,
    robustness_spec,
)

__all__ = [
    "AbsorbedSystem",
    "AlternativeFormulationResult",
    "Design",
    "FitResult",
    "FixedEffect",
    "FormKind",
    "IncomeKind",
    "Interaction",
    "ModelSpec",
    "PROJECTION_VARIANTS",
    "PanelDataset",
    "PrecipControl",
    "ROBUSTNESS_VARIANTS",
    "ResponseEval",
    "Term",
    "Trend",
    "absorb_fixed_effects",
    "build_design",
    "cluster_robust_vcov",
    "fit",
    "fit_alternative_formulation",
    "fit_design",
    "fit_interacted",
    "load_fit",
    "load_model_spec",
    "load_panel",
    "marginal_effects",
    "marginal_warming_rate",
    "parse_term",
    "recover_fixed_effects",
    "response_at",
    "response_curve",
    "response_vector",
    "save_fit",
    "save_model_spec",
    "save_panel",
    "small_sample_factor",
]
