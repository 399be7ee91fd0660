"""Full-batch training loop that records loss and E_k at every iteration."""

from __future__ import annotations

import logging
import math
from collections import deque
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .data import Dataset
from .efficiency import EfficiencyRecord, efficiency_record, should_stop
from .loss import LinearModel, add_bias, mse, mse_gradient, predict
from .optim import OptimizerConfig, OptimizerState, Variant, apply_step, warm_restart_lr

logger = logging.getLogger(__name__)

DIVERGENCE_LIMIT = 1e12


class DivergenceError(RuntimeError):
    """The loss became non-finite or exceeded :data:`DIVERGENCE_LIMIT`."""

    def __init__(self, iteration: int, loss: float):
        self.iteration = iteration
        self.loss = loss
        super().__init__(f"training diverged at iteration {iteration} (loss={loss!r})")


@dataclass(frozen=True)
class StoppingConfig:
    threshold: float = 5.0
    patience: int = 10

    def __post_init__(self):
        if self.patience < 1:
            raise ValueError(f"patience must be >= 1, got {self.patience}")


@dataclass(frozen=True)
class RunConfig:
    """One training run.

    ``initial_learning_rate`` defaults to ``optimizer.alpha``. With
    ``decay_rate < 1`` the rate is multiplied by it after every iteration;
    SGDR ignores the decay and follows its restart schedule instead.
    """

    optimizer: OptimizerConfig = field(default_factory=OptimizerConfig)
    n_iterations: int = 1000
    initial_learning_rate: float | None = None
    decay_rate: float = 1.0
    seed: int = 0
    stopping: StoppingConfig | None = None

    def __post_init__(self):
        if self.initial_learning_rate is None:
            object.__setattr__(self, "initial_learning_rate", self.optimizer.alpha)
        lr = self.initial_learning_rate
        if not (math.isfinite(lr) and lr >= 0):
            raise ValueError(f"initial_learning_rate must be finite and >= 0, got {lr}")
        if not 0.0 < self.decay_rate <= 1.0:
            raise ValueError(f"decay_rate must lie in (0, 1], got {self.decay_rate}")
        if self.n_iterations < 2:
            raise ValueError(f"n_iterations must be >= 2, got {self.n_iterations}")
        if not 0 <= self.seed < 2**64:
            raise ValueError(f"seed must be a 64-bit unsigned integer, got {self.seed}")


@dataclass(frozen=True)
class IterationRecord:
    k: int
    loss: float
    learning_rate_used: float
    efficiency: EfficiencyRecord | None = None


@dataclass
class RunTrace:
    loss_initial: float
    records: list[IterationRecord]
    final_model: LinearModel | None = None
    stopped_at: int | None = None
    run_config: RunConfig | None = None
    validation_loss: float | None = None

    @property
    def losses(self) -> np.ndarray:
        return np.array([r.loss for r in self.records])

    @property
    def efficiencies(self) -> np.ndarray:
        """E_k for k = 2, 3, ... (iteration 1 has none)."""
        return np.array([r.efficiency.e_k for r in self.records if r.efficiency is not None])

    @property
    def final_loss(self) -> float:
        return self.records[-1].loss

    @property
    def final_efficiency(self) -> float | None:
        eff = self.records[-1].efficiency
        return None if eff is None else eff.e_k


def _learning_rate(config: RunConfig, k: int, current: float) -> float:
    opt = config.optimizer
    if opt.variant is Variant.SGDR:
        return warm_restart_lr(
            k - 1, config.initial_learning_rate, min(opt.eta_min, config.initial_learning_rate),
            opt.restart_period, opt.restart_mult,
        )
    return current


def train(dataset: Dataset, config: RunConfig, validation: Dataset | None = None) -> RunTrace:
    """Run gradient descent on the MSE of a linear model and trace E_k.

    Each iteration takes one optimizer step at the current learning rate,
    then evaluates the loss at the updated parameters. Iteration 1 fixes
    ``L_initial``; E_k is recorded from iteration 2 on. Raises
    :class:`DivergenceError` if the loss blows up.
    """
    Xb = add_bias(dataset.features)
    y = dataset.targets
    rng = np.random.Generator(np.random.PCG64(config.seed))
    theta = rng.standard_normal(Xb.shape[1])
    state = OptimizerState.zeros(theta.shape[0])

    def gradient_at(point):
        return mse_gradient(point, Xb, y)

    stop = config.stopping
    window: deque[float] = deque(maxlen=stop.patience if stop else 1)
    records: list[IterationRecord] = []
    loss_initial = prev_loss = math.nan
    stopped_at = None
    lr = config.initial_learning_rate

    for k in range(1, config.n_iterations + 1):
        lr_used = _learning_rate(config, k, lr)
        with np.errstate(over="ignore", invalid="ignore"):
            try:
                theta = apply_step(config.optimizer, state, theta, gradient_at, lr_used)
            except FloatingPointError:
                raise DivergenceError(k, math.nan) from None
            loss = mse(predict(theta, Xb), y)
        if not math.isfinite(loss) or loss > DIVERGENCE_LIMIT:
            raise DivergenceError(k, loss)

        if k == 1:
            if loss <= 0:
                raise ValueError("initial loss is zero; E_k is undefined for a perfect first fit")
            loss_initial = loss
            records.append(IterationRecord(k, loss, lr_used))
        else:
            eff = efficiency_record(k, loss_initial, prev_loss, loss)
            records.append(IterationRecord(k, loss, lr_used, eff))
            if stop is not None:
                window.append(eff.e_k)
                if should_stop(window, stop.threshold, stop.patience):
                    stopped_at = k
                    logger.debug("stopping rule fired at iteration %d", k)
                    break
        prev_loss = loss
        lr = lr * config.decay_rate

    val_loss = None
    if validation is not None:
        val_loss = mse(predict(theta, add_bias(validation.features)), validation.targets)
    return RunTrace(loss_initial, records, LinearModel(theta), stopped_at, config, val_loss)


@dataclass
class RunSummary:
    final_loss: float | None
    final_efficiency: float | None
    stopped_at: int | None
    iterations_run: int
    theta: list[float] | None = None
    error: str | None = None
    diverged_at: int | None = None

    @property
    def diverged(self) -> bool:
        return self.diverged_at is not None


def summarize(trace: RunTrace) -> RunSummary:
    theta = None if trace.final_model is None else [float(v) for v in trace.final_model.theta]
    return RunSummary(
        trace.final_loss, trace.final_efficiency, trace.stopped_at, len(trace.records), theta
    )


@dataclass
class ComparisonEntry:
    summary: RunSummary
    trace: RunTrace | None = None


@dataclass
class ComparisonReport:
    entries: dict[str, ComparisonEntry]

    def __getitem__(self, label: str) -> ComparisonEntry:
        return self.entries[label]

    def labels(self) -> list[str]:
        return sorted(self.entries)


def compare(dataset: Dataset, configs: Sequence[RunConfig], labels: Sequence[str]) -> ComparisonReport:
    """Train every config on the same data; a failing run does not stop the others.

    Divergent runs appear with ``summary.error`` set and no trace.
    """
    if len(configs) < 2:
        raise ValueError("compare needs at least two configs")
    if len(configs) != len(labels):
        raise ValueError(f"{len(configs)} configs but {len(labels)} labels")
    if len(set(labels)) != len(labels):
        raise ValueError(f"labels must be unique, got {list(labels)}")

    entries = {}
    for label, cfg in zip(labels, configs):
        try:
            trace = train(dataset, cfg)
        except DivergenceError as exc:
            logger.info("%s: %s", label, exc)
            entries[label] = ComparisonEntry(
                RunSummary(None, None, None, exc.iteration - 1, error=str(exc), diverged_at=exc.iteration)
            )
        except (ValueError, ArithmeticError) as exc:
            entries[label] = ComparisonEntry(RunSummary(None, None, None, 0, error=str(exc)))
        else:
            entries[label] = ComparisonEntry(summarize(trace), trace)
    return ComparisonReport(entries)
