"""Cross-validated selection of the binned temperature specification."""

from climpanel.selection.candidates import (
    DEFAULT_CANDIDATES,
    PIVOT_TEMPERATURE,
    CandidateBinConfig,
    load_candidates,
)
from climpanel.selection.cross_validation import (
    CandidateScore,
    CvReport,
    RmseScore,
    YearEffectImputation,
    group_kfold_rmse,
    oot_rmse,
    select,
)

__all__ = [
    "DEFAULT_CANDIDATES",
    "PIVOT_TEMPERATURE",
    "CandidateBinConfig",
    "CandidateScore",
    "CvReport",
    "RmseScore",
    "YearEffectImputation",
    "group_kfold_rmse",
    "load_candidates",
    "oot_rmse",
    "select",
]
