"""Fixed-effect absorption by alternating within-transformation.

Each sweep subtracts group means for every factor in turn. With a single
factor one sweep is exact; with several the sweeps repeat until the largest
subtracted mean in a sweep falls below ``tol`` relative to the column scale.
The result equals the residuals of a regression on full dummy sets.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from climpanel.errors import ConvergenceFailure, ValidationError
from climpanel.utils.logging import get_logger

logger = get_logger("climpanel.estimation")


@dataclass
class AbsorbedSystem:
    """Demeaned design and outcome."""

    X: np.ndarray
    y: np.ndarray
    sweeps: int


def _group_means(values: np.ndarray, codes: np.ndarray, counts: np.ndarray) -> np.ndarray:
    n_groups = counts.size
    sums = np.column_stack(
        [np.bincount(codes, weights=values[:, j], minlength=n_groups) for j in range(values.shape[1])]
    )
    return sums / counts[:, None]


def _check_factors(factors: Sequence[np.ndarray], n_rows: int) -> list[np.ndarray]:
    counts = []
    for codes in factors:
        if codes.shape != (n_rows,):
            raise ValidationError("Fixed-effect codes must align with design rows")
        if n_rows and codes.min() < 0:
            raise ValidationError("Fixed-effect codes must be non-negative")
        group_counts = np.bincount(codes).astype(float)
        if np.any(group_counts == 0):
            raise ValidationError("Every fixed-effect group needs at least one observation")
        counts.append(group_counts)
    return counts


def demean(
    values: np.ndarray,
    factors: Sequence[np.ndarray],
    tol: float = 1e-10,
    max_sweeps: int = 10_000,
) -> tuple[np.ndarray, int]:
    """Project ``values`` (rows x columns) off every factor's dummy space.

    Raises:
        ConvergenceFailure: If ``max_sweeps`` sweeps do not reach ``tol``.
    """
    out = np.array(values, dtype=float, copy=True)
    if out.ndim == 1:
        out = out[:, None]
    counts = _check_factors(factors, out.shape[0])
    if not factors or out.shape[1] == 0:
        return out, 0

    scale = np.maximum(1.0, np.abs(out).max(axis=0))
    for sweep in range(1, max_sweeps + 1):
        change = np.zeros(out.shape[1])
        for codes, group_counts in zip(factors, counts):
            means = _group_means(out, codes, group_counts)
            out -= means[codes]
            change = np.maximum(change, np.abs(means).max(axis=0))
        if len(factors) == 1 or np.all(change <= tol * scale):
            return out, sweep
    raise ConvergenceFailure(
        f"Fixed-effect absorption did not converge in {max_sweeps} sweeps",
        details={"max_sweeps": max_sweeps, "tol": tol, "max_change": float(change.max())},
        suggestion="Check for nearly disconnected fixed-effect groups",
    )


def absorb_fixed_effects(
    X: np.ndarray,
    y: np.ndarray,
    factors: Sequence[np.ndarray],
    tol: float = 1e-10,
    max_sweeps: int = 10_000,
) -> AbsorbedSystem:
    """Demean the design and outcome jointly by every fixed-effect factor."""
    stacked = np.column_stack([np.asarray(X, dtype=float), np.asarray(y, dtype=float)])
    out, sweeps = demean(stacked, factors, tol=tol, max_sweeps=max_sweeps)
    logger.debug("Absorbed %d factors in %d sweeps", len(factors), sweeps)
    return AbsorbedSystem(X=out[:, :-1], y=out[:, -1], sweeps=sweeps)


def recover_fixed_effects(
    residual: np.ndarray,
    factors: Sequence[np.ndarray],
    tol: float = 1e-10,
    max_sweeps: int = 10_000,
) -> list[np.ndarray]:
    """Group effects whose sum best fits ``residual`` (y minus X·beta).

    Effects are identified only up to offsetting constants across factors;
    sums such as province effect plus mean year effect are unique.
    """
    r = np.asarray(residual, dtype=float)
    counts = _check_factors(factors, r.size)
    effects = [np.zeros(c.size) for c in counts]
    if not factors:
        return effects
    fitted = np.zeros_like(r)
    scale = max(1.0, float(np.abs(r).max(initial=0.0)))
    for _ in range(max_sweeps):
        change = 0.0
        for f, (codes, group_counts) in enumerate(zip(factors, counts)):
            partial = r - fitted
            step = np.bincount(codes, weights=partial, minlength=group_counts.size) / group_counts
            effects[f] += step
            fitted += step[codes]
            change = max(change, float(np.abs(step).max()))
        if len(factors) == 1 or change <= tol * scale:
            return effects
    raise ConvergenceFailure(
        f"Fixed-effect recovery did not converge in {max_sweeps} sweeps",
        details={"max_sweeps": max_sweeps},
    )
