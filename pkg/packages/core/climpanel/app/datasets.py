"""Dataset validation and synthetic fixture service functions."""

from __future__ import annotations

from pathlib import Path

from climpanel.runlog import log_run
from climpanel.schemas.datasets import SynthRequest, SynthResponse, ValidateRequest, ValidateResponse
from climpanel.utils.config import Config


def run_validate(config: Config, request: ValidateRequest) -> ValidateResponse:
    """Validate the given dataset files and report every violation."""
    from climpanel.validation import DatasetPaths, validate

    paths = DatasetPaths(**{k: Path(v) for k, v in request.model_dump().items() if v is not None})
    report = validate(paths)
    log_run(
        "validate",
        {"checked": len(report.checked), "violations": len(report.violations)},
        log_dir=config.log_dir,
    )
    return ValidateResponse.from_domain(report)


def run_synth(config: Config, request: SynthRequest) -> SynthResponse:
    """Write a synthetic fixture set with a pipeline.yaml referencing it."""
    from climpanel.synthetic import SyntheticSpec, generate_synthetic

    spec = SyntheticSpec(
        n_provinces=request.n_provinces,
        n_years=request.n_years,
        beta1=request.beta1,
        beta2=request.beta2,
        rho=request.rho,
        fe_scale=request.fe_scale,
        noise_sd=request.noise_sd,
        seed=request.seed,
        n_lags=request.n_lags,
        models=tuple(request.models),
        rcps=tuple(request.rcps),
    )
    files = generate_synthetic(spec, Path(request.out))
    log_run("synth", {"out": request.out, "seed": request.seed}, log_dir=config.log_dir)
    return SynthResponse(out=request.out, files={k: str(v) for k, v in files.items()})
