"""SGD, Adam, and AdaBound over flat lists of parameter arrays.

AdaBound clips the per-coordinate Adam step size into a band that starts
wide (behaving like Adam) and shrinks toward final_lr (behaving like SGD):

    lower(k) = final_lr * (1 - 1 / (bound_gamma * k + 1))
    upper(k) = final_lr * (1 + 1 / (bound_gamma * k))

The clipped step size multiplies the bias-corrected first moment, so an
unclipped coordinate takes exactly the Adam update.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ShapeError


@dataclass(frozen=True)
class OptimHyper:
    lr: float = 5e-5
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    final_lr: float = 0.1
    bound_gamma: float = 1e-3
    momentum: float = 0.0

    def __post_init__(self):
        if self.lr <= 0:
            raise ValueError(f"lr must be > 0, got {self.lr}")
        if not 0.0 <= self.beta1 < 1.0 or not 0.0 <= self.beta2 < 1.0:
            raise ValueError(f"betas must be in [0, 1), got {self.beta1}, {self.beta2}")
        if self.eps <= 0 or self.final_lr <= 0 or self.bound_gamma <= 0:
            raise ValueError("eps, final_lr, bound_gamma must all be > 0")
        if not 0.0 <= self.momentum < 1.0:
            raise ValueError(f"momentum must be in [0, 1), got {self.momentum}")


class OptimizerState:
    """Step counter plus first/second moment accumulators, one per parameter."""

    def __init__(self, params: list[np.ndarray], hyper: OptimHyper):
        self.step = 0
        self.m = [np.zeros_like(p) for p in params]
        self.v = [np.zeros_like(p) for p in params]
        self.hyper = hyper


def _check_aligned(params: list[np.ndarray], grads: list[np.ndarray], state: OptimizerState) -> None:
    if len(params) != len(grads) or len(params) != len(state.m):
        raise ShapeError(
            f"optimizer: got {len(params)} params, {len(grads)} grads, state for {len(state.m)}"
        )
    for p, g in zip(params, grads):
        if p.shape != g.shape:
            raise ShapeError(f"optimizer: param shape {p.shape} != grad shape {g.shape}")


def sgd_step(params, grads, state: OptimizerState) -> OptimizerState:
    """In-place SGD update with optional momentum buffering."""
    _check_aligned(params, grads, state)
    h = state.hyper
    state.step += 1
    for p, g, buf in zip(params, grads, state.m):
        if h.momentum != 0.0:
            buf *= h.momentum
            buf += g
            p -= h.lr * buf
        else:
            p -= h.lr * g
    return state


def _update_moments(grads, state: OptimizerState) -> tuple[float, float]:
    h = state.hyper
    state.step += 1
    for g, m, v in zip(grads, state.m, state.v):
        m *= h.beta1
        m += (1.0 - h.beta1) * g
        v *= h.beta2
        v += (1.0 - h.beta2) * g * g
    bc1 = 1.0 - h.beta1**state.step
    bc2 = 1.0 - h.beta2**state.step
    return bc1, bc2


def adam_step(params, grads, state: OptimizerState) -> OptimizerState:
    """In-place Adam update with bias correction."""
    _check_aligned(params, grads, state)
    h = state.hyper
    bc1, bc2 = _update_moments(grads, state)
    for p, m, v in zip(params, state.m, state.v):
        m_hat = m / bc1
        v_hat = v / bc2
        p -= h.lr * m_hat / (np.sqrt(v_hat) + h.eps)
    return state


def adabound_step(params, grads, state: OptimizerState) -> OptimizerState:
    """In-place AdaBound update: Adam step size clipped into the bound band."""
    _check_aligned(params, grads, state)
    h = state.hyper
    bc1, bc2 = _update_moments(grads, state)
    lower, upper = bound_schedule(state.step, h)
    for p, m, v in zip(params, state.m, state.v):
        v_hat = v / bc2
        eta = np.clip(h.lr / (np.sqrt(v_hat) + h.eps), lower, upper)
        p -= eta * (m / bc1)
    return state


def bound_schedule(step: int, hyper: OptimHyper) -> tuple[float, float]:
    """Clip band at a given step; lower rises to final_lr, upper falls to it."""
    if step < 1:
        raise ValueError(f"bound_schedule: step must be >= 1, got {step}")
    lower = hyper.final_lr * (1.0 - 1.0 / (hyper.bound_gamma * step + 1.0))
    upper = hyper.final_lr * (1.0 + 1.0 / (hyper.bound_gamma * step))
    return lower, upper


def step_sizes(state: OptimizerState, clipped: bool) -> list[np.ndarray]:
    """Per-coordinate step sizes implied by the current moments.

    With clipped=False this is the Adam step size lr / (sqrt(v_hat) + eps);
    with clipped=True it is additionally clipped into the AdaBound band at
    the current step.  Requires at least one completed step.
    """
    if state.step < 1:
        raise ValueError("step_sizes: no step has been taken yet")
    h = state.hyper
    bc2 = 1.0 - h.beta2**state.step
    sizes = [h.lr / (np.sqrt(v / bc2) + h.eps) for v in state.v]
    if clipped:
        lower, upper = bound_schedule(state.step, h)
        sizes = [np.clip(s, lower, upper) for s in sizes]
    return sizes


STEP_FUNCTIONS = {"sgd": sgd_step, "adam": adam_step, "adabound": adabound_step}
OPTIMIZER_KINDS = tuple(STEP_FUNCTIONS)
