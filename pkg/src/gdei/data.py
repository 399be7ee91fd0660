"""Synthetic regression data, CSV loading and train/validation splits.

All randomness goes through a local ``numpy.random.Generator`` backed by
PCG64 and seeded from the caller's arguments; nothing touches global RNG
state. Features are drawn row-major with ``Generator.uniform`` and the
Gaussian noise with ``Generator.standard_normal`` (numpy's ziggurat
sampler), so a seed pins the whole dataset on every platform numpy
supports.
"""

from __future__ import annotations

import csv
import io
import math
import os
from dataclasses import dataclass
from pathlib import Path

import numpy as np


class DataError(ValueError):
    """Raised for invalid datasets, generator configs or malformed CSV."""


@dataclass(frozen=True)
class Dataset:
    """Feature matrix (n x m) and target vector (n,)."""

    features: np.ndarray
    targets: np.ndarray
    feature_names: tuple[str, ...] | None = None
    target_name: str = "y"

    def __post_init__(self):
        X = np.asarray(self.features, dtype=np.float64)
        y = np.asarray(self.targets, dtype=np.float64)
        if X.ndim != 2:
            raise DataError(f"features must be 2-D, got shape {X.shape}")
        if y.ndim != 1:
            raise DataError(f"targets must be 1-D, got shape {y.shape}")
        n, m = X.shape
        if n < 1 or m < 1:
            raise DataError(f"dataset needs n >= 1 and m >= 1, got n={n}, m={m}")
        if y.shape[0] != n:
            raise DataError(f"{y.shape[0]} targets for {n} feature rows")
        if not (np.all(np.isfinite(X)) and np.all(np.isfinite(y))):
            raise DataError("dataset contains NaN or Inf")
        names = self.feature_names
        if names is None:
            names = tuple(f"x{j + 1}" for j in range(m))
        elif len(names) != m:
            raise DataError(f"{len(names)} feature names for {m} columns")
        X.setflags(write=False)
        y.setflags(write=False)
        object.__setattr__(self, "features", X)
        object.__setattr__(self, "targets", y)
        object.__setattr__(self, "feature_names", tuple(names))

    @property
    def n(self) -> int:
        return self.features.shape[0]

    @property
    def m(self) -> int:
        return self.features.shape[1]


@dataclass(frozen=True)
class GeneratorConfig:
    n: int = 1000
    m: int = 1
    seed: int = 42
    intercept: float = 4.0
    slope: float = 3.0
    noise_sigma: float = 1.0
    feature_low: float = 0.0
    feature_high: float = 2.0

    def __post_init__(self):
        if self.n < 1 or self.m < 1:
            raise DataError(f"n and m must be positive, got n={self.n}, m={self.m}")
        if not 0 <= self.seed < 2**64:
            raise DataError(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        if not self.noise_sigma >= 0:
            raise DataError(f"noise_sigma must be >= 0, got {self.noise_sigma}")
        if not self.feature_low < self.feature_high:
            raise DataError("feature_low must be below feature_high")


def generate_data(config: GeneratorConfig | None = None, **kwargs) -> Dataset:
    """Draw ``y = intercept + slope * x1 + noise`` with uniform features.

    Only the first feature carries signal; the remaining ``m - 1`` columns
    are irrelevant by construction. Keyword arguments build a
    :class:`GeneratorConfig` when ``config`` is omitted.

    >>> ds = generate_data(n=5, m=2, seed=0)
    >>> ds.features.shape
    (5, 2)
    """
    if config is None:
        config = GeneratorConfig(**kwargs)
    elif kwargs:
        raise TypeError("pass either a GeneratorConfig or keyword arguments, not both")
    rng = np.random.Generator(np.random.PCG64(config.seed))
    X = rng.uniform(config.feature_low, config.feature_high, size=(config.n, config.m))
    noise = rng.standard_normal(config.n) * config.noise_sigma
    y = config.intercept + config.slope * X[:, 0] + noise
    return Dataset(X, y)


def load_csv(path: str | os.PathLike, target_column: str = "y") -> Dataset:
    """Read a headered, comma-separated numeric file.

    Every column other than ``target_column`` becomes a feature, in header
    order. Errors name the 1-based data row (header excluded) and column.
    """
    path = Path(path)
    if not path.is_file():
        raise DataError(f"no such file: {path}")
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    if not rows or not any(cell.strip() for cell in rows[0]):
        raise DataError(f"{path}: empty file")
    header = [h.strip() for h in rows[0]]
    if target_column not in header:
        raise DataError(f"{path}: target column {target_column!r} not in header {header}")
    body = rows[1:]
    if not body:
        raise DataError(f"{path}: header but no data rows")
    if len(header) < 2:
        raise DataError(f"{path}: need at least one feature column besides the target")

    values = np.empty((len(body), len(header)), dtype=np.float64)
    for i, row in enumerate(body, start=1):
        if len(row) != len(header):
            raise DataError(f"{path}: row {i} has {len(row)} fields, expected {len(header)}")
        for j, cell in enumerate(row):
            try:
                v = float(cell)
            except ValueError:
                raise DataError(
                    f"{path}: non-numeric value {cell!r} at row {i}, column {header[j]!r}"
                ) from None
            if not math.isfinite(v):
                raise DataError(f"{path}: non-finite value at row {i}, column {header[j]!r}")
            values[i - 1, j] = v

    t = header.index(target_column)
    feature_idx = [j for j in range(len(header)) if j != t]
    return Dataset(
        values[:, feature_idx],
        values[:, t],
        feature_names=tuple(header[j] for j in feature_idx),
        target_name=target_column,
    )


def dataset_to_csv(dataset: Dataset) -> str:
    """Render a dataset as CSV text (features then target, LF endings).

    Floats use ``repr``, the shortest string that round-trips exactly.
    """
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow([*dataset.feature_names, dataset.target_name])
    for row, target in zip(dataset.features, dataset.targets):
        writer.writerow([repr(float(v)) for v in row] + [repr(float(target))])
    return buf.getvalue()


def split(
    dataset: Dataset, validation_fraction: float, seed: int
) -> tuple[Dataset, Dataset]:
    """Shuffle rows with ``seed`` and cut off ``floor(n * fraction)`` for validation."""
    if not 0.0 < validation_fraction < 1.0:
        raise DataError(f"validation_fraction must lie in (0, 1), got {validation_fraction}")
    n = dataset.n
    n_val = math.floor(n * validation_fraction)
    if n - n_val < 1:
        raise DataError("split would leave the training set empty")
    if n_val < 1:
        raise DataError(f"validation set would be empty for n={n}")
    train_idx, val_idx = split_indices(n, validation_fraction, seed)

    def take(idx):
        return Dataset(
            dataset.features[idx],
            dataset.targets[idx],
            feature_names=dataset.feature_names,
            target_name=dataset.target_name,
        )

    return take(train_idx), take(val_idx)


def split_indices(n: int, validation_fraction: float, seed: int) -> tuple[np.ndarray, np.ndarray]:
    """Row indices (train, validation) that :func:`split` would produce."""
    n_val = math.floor(n * validation_fraction)
    order = np.random.Generator(np.random.PCG64(seed)).permutation(n)
    return order[n_val:], order[:n_val]
