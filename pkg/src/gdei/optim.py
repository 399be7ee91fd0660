"""First-order update rules sharing one state container.

Every ``*_step`` function takes the current parameters and gradient, mutates
the :class:`OptimizerState` it is given, and returns the new parameter
vector. The input ``theta`` is never modified in place.

Conventions:

* AdaGrad and RMSProp put epsilon inside the square root; the Adam family
  puts it outside.
* The Adam-family step counter is incremented before bias correction, so the
  first step uses ``t = 1``.
* NAG takes a gradient *function*, since it evaluates the look-ahead point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable

import numpy as np

GradientFn = Callable[[np.ndarray], np.ndarray]


class Variant(str, Enum):
    GD = "gd"
    MOMENTUM = "momentum"
    NAG = "nag"
    ADAGRAD = "adagrad"
    RMSPROP = "rmsprop"
    ADAM = "adam"
    ADAMAX = "adamax"
    AMSGRAD = "amsgrad"
    NADAM = "nadam"
    SGDR = "sgdr"

    @classmethod
    def parse(cls, name: str) -> "Variant":
        key = name.strip().lower().replace("-", "").replace("_", "")
        aliases = {"sgd": "gd", "vanilla": "gd", "sgdwarmrestarts": "sgdr", "warmrestarts": "sgdr"}
        key = aliases.get(key, key)
        try:
            return cls(key)
        except ValueError:
            valid = ", ".join(v.value for v in cls)
            raise ValueError(f"unknown optimizer {name!r}; choose from {valid}") from None


@dataclass(frozen=True)
class OptimizerConfig:
    """Hyperparameters for one optimizer.

    ``beta`` is the momentum / RMSProp decay and doubles as NAG's gamma.
    ``restart_period``, ``restart_mult`` and ``eta_min`` only matter for
    :attr:`Variant.SGDR`.
    """

    variant: Variant = Variant.GD
    alpha: float = 0.01
    beta: float = 0.9
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-8
    restart_period: int = 100
    restart_mult: int = 1
    eta_min: float = 0.0

    def __post_init__(self):
        if not isinstance(self.variant, Variant):
            object.__setattr__(self, "variant", Variant.parse(str(self.variant)))
        if not (math.isfinite(self.alpha) and self.alpha >= 0):
            raise ValueError(f"alpha must be a finite value >= 0, got {self.alpha}")
        for name in ("beta", "beta1", "beta2"):
            v = getattr(self, name)
            if not 0.0 <= v < 1.0:
                raise ValueError(f"{name} must lie in [0, 1), got {v}")
        if not self.epsilon > 0:
            raise ValueError(f"epsilon must be > 0, got {self.epsilon}")
        if self.restart_period < 1:
            raise ValueError(f"restart_period must be >= 1, got {self.restart_period}")
        if self.restart_mult < 1:
            raise ValueError(f"restart_mult must be >= 1, got {self.restart_mult}")
        if not self.eta_min >= 0:
            raise ValueError(f"eta_min must be >= 0, got {self.eta_min}")


@dataclass
class OptimizerState:
    """Accumulators for every variant; each variant touches only its own."""

    step_count: int = 0
    velocity: np.ndarray = field(default_factory=lambda: np.zeros(0))
    grad_sq_accum: np.ndarray = field(default_factory=lambda: np.zeros(0))
    grad_sq_ema: np.ndarray = field(default_factory=lambda: np.zeros(0))
    first_moment: np.ndarray = field(default_factory=lambda: np.zeros(0))
    second_moment: np.ndarray = field(default_factory=lambda: np.zeros(0))
    second_moment_max: np.ndarray = field(default_factory=lambda: np.zeros(0))

    @classmethod
    def zeros(cls, dim: int) -> "OptimizerState":
        return cls(
            0,
            np.zeros(dim),
            np.zeros(dim),
            np.zeros(dim),
            np.zeros(dim),
            np.zeros(dim),
            np.zeros(dim),
        )

    @property
    def dim(self) -> int:
        return self.velocity.shape[0]


def _check(theta, gradient, state=None):
    theta = np.asarray(theta, dtype=np.float64)
    g = np.asarray(gradient, dtype=np.float64)
    if theta.shape != g.shape:
        raise ValueError(f"theta {theta.shape} and gradient {g.shape} differ in shape")
    if not np.all(np.isfinite(g)):
        raise FloatingPointError("non-finite gradient")
    if state is not None and state.dim != theta.shape[0]:
        raise ValueError(f"optimizer state has dimension {state.dim}, theta has {theta.shape[0]}")
    return theta, g


def gd_step(theta, gradient, alpha: float) -> np.ndarray:
    theta, g = _check(theta, gradient)
    return theta - alpha * g


def momentum_step(state: OptimizerState, theta, gradient, alpha: float, beta: float) -> np.ndarray:
    """EMA velocity ``v = beta*v + (1-beta)*g``, then ``theta - alpha*v``."""
    theta, g = _check(theta, gradient, state)
    state.velocity = beta * state.velocity + (1.0 - beta) * g
    state.step_count += 1
    return theta - alpha * state.velocity


def nag_step(
    state: OptimizerState, theta, gradient_at: GradientFn, gamma: float, eta: float
) -> np.ndarray:
    """Nesterov step: the gradient is taken at ``theta - gamma*v``."""
    theta = np.asarray(theta, dtype=np.float64)
    lookahead = theta - gamma * state.velocity
    lookahead, g = _check(lookahead, gradient_at(lookahead), state)
    state.velocity = gamma * state.velocity + eta * g
    state.step_count += 1
    return theta - state.velocity


def adagrad_step(state: OptimizerState, theta, gradient, alpha: float, epsilon: float = 1e-8) -> np.ndarray:
    theta, g = _check(theta, gradient, state)
    state.grad_sq_accum = state.grad_sq_accum + g * g
    state.step_count += 1
    return theta - alpha / np.sqrt(state.grad_sq_accum + epsilon) * g


def rmsprop_step(
    state: OptimizerState, theta, gradient, alpha: float, beta: float, epsilon: float = 1e-8
) -> np.ndarray:
    theta, g = _check(theta, gradient, state)
    state.grad_sq_ema = beta * state.grad_sq_ema + (1.0 - beta) * (g * g)
    state.step_count += 1
    return theta - alpha / np.sqrt(state.grad_sq_ema + epsilon) * g


def _adam_moments(state, g, beta1, beta2):
    state.step_count += 1
    state.first_moment = beta1 * state.first_moment + (1.0 - beta1) * g
    state.second_moment = beta2 * state.second_moment + (1.0 - beta2) * (g * g)
    t = state.step_count
    m_hat = state.first_moment / (1.0 - beta1**t)
    v_hat = state.second_moment / (1.0 - beta2**t)
    return t, m_hat, v_hat


def adam_step(
    state: OptimizerState,
    theta,
    gradient,
    alpha: float,
    beta1: float = 0.9,
    beta2: float = 0.999,
    epsilon: float = 1e-8,
) -> np.ndarray:
    theta, g = _check(theta, gradient, state)
    _, m_hat, v_hat = _adam_moments(state, g, beta1, beta2)
    return theta - alpha * m_hat / (np.sqrt(v_hat) + epsilon)


def adamax_step(
    state: OptimizerState,
    theta,
    gradient,
    alpha: float,
    beta1: float = 0.9,
    beta2: float = 0.999,
    epsilon: float = 1e-8,
) -> np.ndarray:
    """Adam with the second moment replaced by a decayed running max of ``|g|``.

    The max ``u`` lives in ``state.second_moment``.
    """
    theta, g = _check(theta, gradient, state)
    state.step_count += 1
    t = state.step_count
    state.first_moment = beta1 * state.first_moment + (1.0 - beta1) * g
    state.second_moment = np.maximum(beta2 * state.second_moment, np.abs(g))
    return theta - (alpha / (1.0 - beta1**t)) * state.first_moment / (state.second_moment + epsilon)


def amsgrad_step(
    state: OptimizerState,
    theta,
    gradient,
    alpha: float,
    beta1: float = 0.9,
    beta2: float = 0.999,
    epsilon: float = 1e-8,
) -> np.ndarray:
    """Adam, but normalised by the running max of the bias-corrected second moment."""
    theta, g = _check(theta, gradient, state)
    _, m_hat, v_hat = _adam_moments(state, g, beta1, beta2)
    state.second_moment_max = np.maximum(state.second_moment_max, v_hat)
    return theta - alpha * m_hat / (np.sqrt(state.second_moment_max) + epsilon)


def nadam_step(
    state: OptimizerState,
    theta,
    gradient,
    alpha: float,
    beta1: float = 0.9,
    beta2: float = 0.999,
    epsilon: float = 1e-8,
) -> np.ndarray:
    theta, g = _check(theta, gradient, state)
    t, m_hat, v_hat = _adam_moments(state, g, beta1, beta2)
    blended = beta1 * m_hat + (1.0 - beta1) * g / (1.0 - beta1**t)
    return theta - alpha * blended / (np.sqrt(v_hat) + epsilon)


def warm_restart_lr(
    t: int,
    eta_max: float,
    eta_min: float = 0.0,
    restart_period: int = 100,
    restart_mult: int = 1,
) -> float:
    """Cosine-annealed learning rate with warm restarts at iteration ``t`` (0-based).

    Cycle lengths are ``T0, T0*mult, T0*mult**2, ...``; each cycle starts at
    ``eta_max`` and anneals towards ``eta_min``.

    >>> warm_restart_lr(5, 1.0, 0.0, restart_period=10)
    0.5
    """
    if restart_period < 1 or restart_mult < 1:
        raise ValueError("restart_period and restart_mult must be >= 1")
    if t < 0:
        raise ValueError(f"t must be >= 0, got {t}")
    if eta_min > eta_max:
        raise ValueError("eta_min must not exceed eta_max")
    if restart_mult == 1:
        t_cur, period = t % restart_period, restart_period
    else:
        t_cur, period = t, restart_period
        while t_cur >= period:
            t_cur -= period
            period *= restart_mult
    if t_cur == 0:
        return float(eta_max)
    return eta_min + 0.5 * (eta_max - eta_min) * (1.0 + math.cos(math.pi * t_cur / period))


def apply_step(
    config: OptimizerConfig,
    state: OptimizerState,
    theta: np.ndarray,
    gradient_at: GradientFn,
    lr: float,
) -> np.ndarray:
    """Dispatch one update for ``config.variant`` at learning rate ``lr``.

    ``lr`` replaces ``config.alpha`` so callers can apply decay or a
    restart schedule; for SGDR it is expected to come from
    :func:`warm_restart_lr`.
    """
    v = config.variant
    if v is Variant.NAG:
        return nag_step(state, theta, gradient_at, config.beta, lr)
    g = gradient_at(theta)
    if v in (Variant.GD, Variant.SGDR):
        state.step_count += 1
        return gd_step(theta, g, lr)
    if v is Variant.MOMENTUM:
        return momentum_step(state, theta, g, lr, config.beta)
    if v is Variant.ADAGRAD:
        return adagrad_step(state, theta, g, lr, config.epsilon)
    if v is Variant.RMSPROP:
        return rmsprop_step(state, theta, g, lr, config.beta, config.epsilon)
    adam_family = {
        Variant.ADAM: adam_step,
        Variant.ADAMAX: adamax_step,
        Variant.AMSGRAD: amsgrad_step,
        Variant.NADAM: nadam_step,
    }
    return adam_family[v](state, theta, g, lr, config.beta1, config.beta2, config.epsilon)
