"""Column-wise z-normalization with (n-1) standard deviations."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import ConstantColumn


@dataclass(frozen=True)
class Standardizer:
    means: np.ndarray
    stds: np.ndarray
    names: tuple

    def apply(self, X: np.ndarray) -> np.ndarray:
        return (np.asarray(X, dtype=float) - self.means) / self.stds

    def inverse(self, Z: np.ndarray) -> np.ndarray:
        return np.asarray(Z, dtype=float) * self.stds + self.means


def znorm_fit(X: np.ndarray, names=None) -> Standardizer:
    X = np.asarray(X, dtype=float)
    if X.shape[0] < 2:
        raise ValueError("need at least 2 rows to standardize")
    if names is None:
        names = tuple(f"x{j}" for j in range(X.shape[1]))
    means = X.mean(axis=0)
    stds = X.std(axis=0, ddof=1)
    for j, s in enumerate(stds):
        if s == 0.0:
            raise ConstantColumn(names[j])
    return Standardizer(means=means, stds=stds, names=tuple(names))


def znorm_apply(X: np.ndarray, names=None):
    std = znorm_fit(X, names)
    return std, std.apply(X)
