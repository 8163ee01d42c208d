"""Least-squares helpers shared by VAR estimation and local projections."""

from __future__ import annotations

import numpy as np

from .exceptions import SingularDesignError


def ols(y: np.ndarray, X: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Least squares of ``y`` (n or n x m) on ``X`` (n x k).

    Returns ``(beta, residuals)``. Raises SingularDesignError when ``X``
    does not have full column rank.
    """
    beta, _, rank, sv = np.linalg.lstsq(X, y, rcond=None)
    if rank < X.shape[1]:
        raise SingularDesignError(
            f"regressor matrix is rank deficient (rank {rank} < {X.shape[1]} columns); "
            "check for constant or collinear columns"
        )
    # lstsq's default cutoff misses near-exact collinearity after floating-point noise
    if sv[-1] <= sv[0] * 1e-12:
        raise SingularDesignError(
            f"regressor matrix is numerically singular (condition number {sv[0] / sv[-1]:.3g})"
        )
    return beta, y - X @ beta


def linear_detrend(values: np.ndarray) -> np.ndarray:
    """Residuals of each column regressed on a constant and a linear time index."""
    T = values.shape[0]
    trend = np.column_stack([np.ones(T), np.arange(T, dtype=float)])
    _, resid = ols(values, trend)
    return resid


def lag_matrix(values: np.ndarray, p: int, start: int, stop: int) -> np.ndarray:
    """Rows ``t`` in ``[start, stop)`` of ``[W_{t-1}, ..., W_{t-p}]``."""
    return np.hstack([values[start - j : stop - j] for j in range(1, p + 1)])
