"""Gradient descent instrumented with the Gradient Descent Efficiency Index (E_k)."""

from .data import DataError, Dataset, GeneratorConfig, generate_data, load_csv, split
from .efficiency import (
    EfficiencyInputs,
    EfficiencyRecord,
    delta_loss,
    efficiency_from_losses,
    efficiency_score,
    proportion_reduced,
    should_stop,
)
from .loss import LinearModel, add_bias, least_squares, mse, mse_gradient, predict
from .optim import OptimizerConfig, OptimizerState, Variant, warm_restart_lr
from .runner import (
    ComparisonReport,
    DivergenceError,
    IterationRecord,
    RunConfig,
    RunTrace,
    StoppingConfig,
    compare,
    train,
)

__version__ = "0.1.0"

__all__ = [
    "ComparisonReport",
    "DataError",
    "Dataset",
    "DivergenceError",
    "EfficiencyInputs",
    "EfficiencyRecord",
    "GeneratorConfig",
    "IterationRecord",
    "LinearModel",
    "OptimizerConfig",
    "OptimizerState",
    "RunConfig",
    "RunTrace",
    "StoppingConfig",
    "Variant",
    "add_bias",
    "compare",
    "delta_loss",
    "efficiency_from_losses",
    "efficiency_score",
    "generate_data",
    "least_squares",
    "load_csv",
    "mse",
    "mse_gradient",
    "predict",
    "proportion_reduced",
    "should_stop",
    "split",
    "train",
    "warm_restart_lr",
]
