"""MSE loss, linear predictions and the analytic gradient for a bias-augmented model."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass
class LinearModel:
    """Parameter vector ``theta``; ``theta[0]`` is the intercept."""

    theta: np.ndarray

    def __post_init__(self):
        self.theta = np.asarray(self.theta, dtype=np.float64)
        if self.theta.ndim != 1 or self.theta.size < 2:
            raise ValueError(f"theta must be a 1-D vector of length >= 2, got {self.theta.shape}")
        if not np.all(np.isfinite(self.theta)):
            raise ValueError("theta contains NaN or Inf")

    @property
    def intercept(self) -> float:
        return float(self.theta[0])

    @property
    def weights(self) -> np.ndarray:
        return self.theta[1:]


def add_bias(features: np.ndarray) -> np.ndarray:
    """Prepend a column of ones: (n, m) -> (n, m + 1)."""
    X = np.asarray(features, dtype=np.float64)
    if X.ndim != 2 or X.shape[0] < 1 or X.shape[1] < 1:
        raise ValueError(f"expected a non-empty (n, m) matrix, got shape {X.shape}")
    return np.hstack([np.ones((X.shape[0], 1)), X])


def _theta(model) -> np.ndarray:
    return model.theta if isinstance(model, LinearModel) else np.asarray(model, dtype=np.float64)


def predict(model: LinearModel | np.ndarray, features_with_bias: np.ndarray) -> np.ndarray:
    theta = _theta(model)
    Xb = np.asarray(features_with_bias, dtype=np.float64)
    if Xb.ndim != 2 or Xb.shape[1] != theta.shape[0]:
        raise ValueError(f"features_with_bias shape {Xb.shape} does not match theta length {theta.shape[0]}")
    return Xb @ theta


def mse(predictions: np.ndarray, targets: np.ndarray) -> float:
    """Mean of squared residuals."""
    p = np.asarray(predictions, dtype=np.float64)
    t = np.asarray(targets, dtype=np.float64)
    if p.shape != t.shape or p.ndim != 1:
        raise ValueError(f"shape mismatch: predictions {p.shape}, targets {t.shape}")
    if p.size == 0:
        raise ValueError("mse of empty vectors")
    r = t - p
    return float(np.dot(r, r) / r.size)


def mse_gradient(
    model: LinearModel | np.ndarray, features_with_bias: np.ndarray, targets: np.ndarray
) -> np.ndarray:
    """Exact gradient of the MSE w.r.t. theta: ``(2/n) Xb^T (Xb theta - y)``."""
    Xb = np.asarray(features_with_bias, dtype=np.float64)
    y = np.asarray(targets, dtype=np.float64)
    if Xb.ndim != 2 or y.shape != (Xb.shape[0],):
        raise ValueError(f"targets shape {y.shape} does not match features shape {Xb.shape}")
    residual = predict(model, Xb) - y
    return (2.0 / Xb.shape[0]) * (Xb.T @ residual)


def least_squares(features_with_bias: np.ndarray, targets: np.ndarray) -> np.ndarray:
    """Closed-form minimiser of the MSE via the normal equations."""
    Xb = np.asarray(features_with_bias, dtype=np.float64)
    return np.linalg.solve(Xb.T @ Xb, Xb.T @ np.asarray(targets, dtype=np.float64))
