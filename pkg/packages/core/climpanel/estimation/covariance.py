"""Cluster-robust covariance for least-squares fits."""

from __future__ import annotations

import numpy as np

from climpanel.errors import DegenerateClusteringError, TooFewObservationsError


def small_sample_factor(n_obs: int, n_params: int, n_clusters: int) -> float:
    """G/(G-1) * (N-1)/(N-K)."""
    if n_obs <= n_params:
        raise TooFewObservationsError(
            f"{n_obs} observations cannot support {n_params} parameters",
            details={"n_obs": n_obs, "n_params": n_params},
        )
    return n_clusters / (n_clusters - 1) * (n_obs - 1) / (n_obs - n_params)


def cluster_robust_vcov(
    X: np.ndarray,
    residuals: np.ndarray,
    clusters: np.ndarray,
    bread: np.ndarray | None = None,
) -> np.ndarray:
    """Sandwich covariance (X'X)^-1 (sum_g X_g' e_g e_g' X_g) (X'X)^-1, clustered.

    Args:
        X: Design used in the fit (already demeaned when fixed effects were absorbed).
        residuals: Fit residuals aligned with ``X``.
        clusters: Cluster label per row (any hashable values).
        bread: Optional precomputed (X'X)^-1.

    Raises:
        DegenerateClusteringError: If fewer than two clusters are present.
    """
    X = np.asarray(X, dtype=float)
    e = np.asarray(residuals, dtype=float)
    _, inverse = np.unique(np.asarray(clusters), return_inverse=True)
    codes = np.asarray(inverse).ravel()
    n_clusters = int(codes.max()) + 1 if codes.size else 0
    if n_clusters < 2:
        raise DegenerateClusteringError(
            f"Cluster-robust covariance needs at least 2 clusters, got {n_clusters}",
            details={"clusters": n_clusters},
        )
    n_obs, n_params = X.shape
    if bread is None:
        bread = np.linalg.inv(X.T @ X)

    scores = X * e[:, None]
    cluster_scores = np.column_stack(
        [np.bincount(codes, weights=scores[:, j], minlength=n_clusters) for j in range(n_params)]
    )
    meat = cluster_scores.T @ cluster_scores
    vcov = small_sample_factor(n_obs, n_params, n_clusters) * (bread @ meat @ bread)
    return (vcov + vcov.T) / 2.0
