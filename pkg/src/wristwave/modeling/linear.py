"""Ordinary least squares with an explicit intercept."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import RankDeficient


@dataclass(frozen=True)
class LinearModel:
    beta: np.ndarray       # [intercept, coefficients...]
    sigma2: float          # residual variance, RSS / (n - p)
    feature_names: tuple

    def predict(self, X: np.ndarray) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=float))
        return self.beta[0] + X @ self.beta[1:]


def ols_fit(X, y, names=None) -> LinearModel:
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    y = np.asarray(y, dtype=float)
    n, p = X.shape
    if names is None:
        names = tuple(f"x{j}" for j in range(p))
    design = np.column_stack([np.ones(n), X])
    if n <= p:
        raise RankDeficient(f"n={n} rows for p={p} features")
    if np.linalg.matrix_rank(design) < p + 1:
        raise RankDeficient("design matrix is rank deficient")
    beta, *_ = np.linalg.lstsq(design, y, rcond=None)
    resid = y - design @ beta
    dof = n - (p + 1)
    sigma2 = float(resid @ resid / dof) if dof > 0 else 0.0
    return LinearModel(beta=beta, sigma2=sigma2, feature_names=tuple(names))
