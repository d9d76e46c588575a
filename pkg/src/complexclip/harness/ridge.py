"""Ridge regression on standardized features, primal or dual."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import linalg

from ..errors import DegenerateInput


@dataclass(frozen=True, eq=False)
class RidgeModel:
    weights: np.ndarray
    mean: np.ndarray
    scale: np.ndarray
    lam: float
    residual: float
    solver: str

    def standardize(self, features: np.ndarray) -> np.ndarray:
        return (np.asarray(features, dtype=np.float64) - self.mean) / self.scale

    def decision_function(self, features: np.ndarray) -> np.ndarray:
        return self.standardize(features) @ self.weights


def standardize_columns(features: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Zero-mean, unit-variance columns; constant columns end up all zero."""
    mean = features.mean(axis=0)
    scale = features.std(axis=0)
    scale[scale == 0] = 1.0
    return (features - mean) / scale, mean, scale


def train_ridge(features: np.ndarray, labels: np.ndarray, lam: float, solver: str = "auto") -> RidgeModel:
    """Solve ``(G^T G + lam I) w = G^T y`` on the standardized features ``G``.

    ``labels`` are +-1 targets. With fewer rows than columns the ``n x n``
    dual system ``(G G^T + lam I) a = y``, ``w = G^T a`` is solved instead;
    both give the same ``w``.
    """
    X = np.asarray(features, dtype=np.float64)
    y = np.asarray(labels, dtype=np.float64).ravel()
    if X.ndim != 2 or X.shape[0] != y.size:
        raise ValueError(f"features {X.shape} and labels {y.shape} do not align")
    n, d = X.shape
    if n < 2:
        raise DegenerateInput("need at least two training rows")
    if np.unique(y).size < 2:
        raise DegenerateInput("all labels are identical")
    if not lam > 0:
        raise ValueError(f"lambda must be positive, got {lam}")
    if solver == "auto":
        solver = "dual" if n < d else "primal"

    G, mean, scale = standardize_columns(X)
    if solver == "primal":
        A = G.T @ G
        A[np.diag_indices_from(A)] += lam
        w = linalg.solve(A, G.T @ y, assume_a="pos")
    elif solver == "dual":
        K = G @ G.T
        K[np.diag_indices_from(K)] += lam
        w = G.T @ linalg.solve(K, y, assume_a="pos")
    else:
        raise ValueError(f"unknown solver {solver!r}")

    rhs = G.T @ y
    lhs = G.T @ (G @ w) + lam * w
    denom = np.linalg.norm(rhs)
    residual = float(np.linalg.norm(lhs - rhs) / denom) if denom > 0 else float(np.linalg.norm(lhs))
    return RidgeModel(w, mean, scale, float(lam), residual, solver)
