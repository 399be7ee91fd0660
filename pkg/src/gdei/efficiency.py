"""Gradient Descent Efficiency Index (E_k) and a stopping rule built on it.

    P_k = (L_initial - L_k) / L_initial
    D_k = |L_{k-1} - L_k|
    E_k = 100 - min(100, max(1, 100 * P_k / (1 + ln(1 + D_k**2))))

The clamps confine E_k to [0, 99]. Low scores mean most of the initial loss
is gone and the last step was stable, i.e. further iterations buy little.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

DEFAULT_STOP_THRESHOLD = 5.0
DEFAULT_STOP_PATIENCE = 10


@dataclass(frozen=True)
class EfficiencyInputs:
    loss_initial: float
    loss_prev: float
    loss_current: float

    def __post_init__(self):
        if not self.loss_initial > 0:
            raise ValueError(f"loss_initial must be > 0, got {self.loss_initial}")
        for name in ("loss_initial", "loss_prev", "loss_current"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} is not finite")


@dataclass(frozen=True)
class EfficiencyRecord:
    k: int
    p_k: float
    delta_k: float
    e_k: float


def proportion_reduced(loss_initial: float, loss_current: float) -> float:
    """Fraction of the initial loss removed; negative if the loss went up."""
    if not loss_initial > 0:
        raise ValueError(f"loss_initial must be > 0, got {loss_initial}")
    return (loss_initial - loss_current) / loss_initial


def delta_loss(loss_prev: float, loss_current: float) -> float:
    return abs(loss_prev - loss_current)


def efficiency_score(p_k: float, delta_k: float) -> float:
    """E_k from the proportion reduced and the last absolute loss change."""
    if delta_k < 0:
        raise ValueError(f"delta_k must be >= 0, got {delta_k}")
    # log1p(d*d) == ln(1 + d**2) without cancellation for tiny d; d*d may
    # overflow to inf, which correctly drives the ratio to 0.
    ratio = 100.0 * p_k / (1.0 + math.log1p(delta_k * delta_k))
    return 100.0 - min(100.0, max(1.0, ratio))


def efficiency_from_losses(inputs: EfficiencyInputs) -> float:
    return efficiency_score(
        proportion_reduced(inputs.loss_initial, inputs.loss_current),
        delta_loss(inputs.loss_prev, inputs.loss_current),
    )


def efficiency_record(k: int, loss_initial: float, loss_prev: float, loss_current: float) -> EfficiencyRecord:
    """Compute P_k, D_k and E_k together for iteration ``k``."""
    inputs = EfficiencyInputs(loss_initial, loss_prev, loss_current)
    p = proportion_reduced(loss_initial, loss_current)
    d = delta_loss(loss_prev, loss_current)
    return EfficiencyRecord(k, p, d, efficiency_from_losses(inputs))


def should_stop(
    recent_scores: Sequence[float],
    threshold: float = DEFAULT_STOP_THRESHOLD,
    patience: int = DEFAULT_STOP_PATIENCE,
) -> bool:
    """True when the last ``patience`` scores are all at or below ``threshold``."""
    if patience < 1:
        raise ValueError(f"patience must be >= 1, got {patience}")
    if len(recent_scores) < patience:
        return False
    return all(s <= threshold for s in list(recent_scores)[-patience:])
