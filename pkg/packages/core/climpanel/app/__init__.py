"""Application service layer for climpanel.

This module provides the shared business logic behind the CLI and the
pipeline. Each submodule exposes functions that:
1. Accept a Config and a validated Pydantic request
2. Coordinate the domain packages (weather, estimation, projection, ...)
3. Return Pydantic response schemas
4. Raise typed errors from climpanel.errors on failure
"""

from __future__ import annotations

from pathlib import Path

from climpanel.errors import ConfigurationError
from climpanel.estimation.spec import ModelSpec, load_model_spec
from climpanel.estimation.variants import (
    PROJECTION_VARIANTS,
    ROBUSTNESS_VARIANTS,
    projection_spec,
    robustness_spec,
)


def resolve_spec(spec_path: str | Path | None = None, variant: str | None = None) -> ModelSpec:
    """Pick a model spec from a spec.cfg file or a named variant.

    Without either, the baseline robustness spec is used.

    Raises:
        ConfigurationError: If both are given or the variant name is unknown.
    """
    if spec_path is not None and variant is not None:
        raise ConfigurationError(
            "Give either a spec file or a variant name, not both",
            suggestion="Drop --spec or --variant",
        )
    if spec_path is not None:
        return load_model_spec(Path(spec_path))
    if variant is None or variant in ROBUSTNESS_VARIANTS:
        return robustness_spec(variant or "baseline")
    if variant in PROJECTION_VARIANTS:
        return projection_spec(variant)
    raise ConfigurationError(
        f"Unknown variant {variant}",
        details={"variant": variant},
        suggestion=f"Valid variants: {', '.join([*ROBUSTNESS_VARIANTS, *PROJECTION_VARIANTS])}",
    )
