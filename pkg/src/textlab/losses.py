"""Cross-entropy, focal, and cross-entropy-weighted-focal (CEWF) losses.

Each loss exists in two forms: a scalar form on the true-class probability
(used for curve emission and property checks) and a batched logits form
with analytic gradients (used for training).

CEWF blends cross-entropy and focal per sample:

    cewf(p) = (1 - s) * ce(p) + s * focal(p),   s = sigmoid(t * (2p - 1))

where ``s`` is the focal-term weight e^{pt} / (e^{pt} + e^{(1-p)t}) in a
form that cannot overflow for large ``t``.  Since s is in (0, 1) the value
always lies between the focal and cross-entropy losses.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import NumericError
from .tensor import Tensor, as_array, sigmoid

LOSS_KINDS = ("CE", "Focal", "CEWF")

DEFAULT_GAMMA = 2.0
DEFAULT_T = 1.0
DEFAULT_PROB_FLOOR = 1e-7


@dataclass(frozen=True)
class LossConfig:
    """Loss selector plus hyperparameters.

    gamma is the focusing exponent of the focal term; t is the CEWF
    weighting temperature; prob_floor clamps probabilities away from
    0 and 1 before any log.
    """

    kind: str = "CEWF"
    gamma: float = DEFAULT_GAMMA
    t: float = DEFAULT_T
    prob_floor: float = DEFAULT_PROB_FLOOR

    def __post_init__(self):
        if self.kind not in LOSS_KINDS:
            raise ValueError(f"unknown loss kind {self.kind!r}, expected one of {LOSS_KINDS}")
        if self.gamma < 0:
            raise ValueError(f"gamma must be >= 0, got {self.gamma}")
        if self.t < 0:
            raise ValueError(f"t must be >= 0, got {self.t}")
        if not 0.0 < self.prob_floor <= 1e-3:
            raise ValueError(f"prob_floor must be in (0, 1e-3], got {self.prob_floor}")


@dataclass(frozen=True)
class LossValue:
    """Batch loss: mean over samples plus the per-sample values."""

    total: float
    per_sample: np.ndarray


def _clamp(p: np.ndarray, prob_floor: float) -> np.ndarray:
    return np.clip(p, prob_floor, 1.0 - prob_floor)


def ce_values(p: np.ndarray) -> np.ndarray:
    """-log(p) on already-clamped probabilities."""
    return -np.log(p)


def focal_values(p: np.ndarray, gamma: float) -> np.ndarray:
    """-(1-p)^gamma * log(p); reduces to cross-entropy at gamma = 0."""
    if gamma == 0.0:
        return ce_values(p)
    return -((1.0 - p) ** gamma) * np.log(p)


def focal_term_weight(p: np.ndarray, t: float) -> np.ndarray:
    """Weight on the focal term: e^{pt} / (e^{pt} + e^{(1-p)t}) = sigmoid(t(2p-1))."""
    return sigmoid(t * (2.0 * np.asarray(p, dtype=np.float64) - 1.0))


def cewf_values(p: np.ndarray, gamma: float, t: float) -> np.ndarray:
    s = focal_term_weight(p, t)
    return (1.0 - s) * ce_values(p) + s * focal_values(p, gamma)


def ce_grad(p: np.ndarray) -> np.ndarray:
    return -1.0 / p


def focal_grad(p: np.ndarray, gamma: float) -> np.ndarray:
    if gamma == 0.0:
        return ce_grad(p)
    q = 1.0 - p
    return gamma * q ** (gamma - 1.0) * np.log(p) - q**gamma / p


def cewf_grad(p: np.ndarray, gamma: float, t: float) -> np.ndarray:
    s = focal_term_weight(p, t)
    ds = 2.0 * t * s * (1.0 - s)
    return ds * (focal_values(p, gamma) - ce_values(p)) + (1.0 - s) * ce_grad(p) + s * focal_grad(p, gamma)


def _check_scalar_prob(p: float) -> None:
    if not np.isfinite(p):
        raise NumericError(f"loss: probability must be finite, got {p}")


def ce_scalar(p: float, prob_floor: float = DEFAULT_PROB_FLOOR) -> float:
    """Cross-entropy at the true-class probability p."""
    _check_scalar_prob(p)
    return float(ce_values(_clamp(np.float64(p), prob_floor)))


def focal_scalar(p: float, gamma: float, prob_floor: float = DEFAULT_PROB_FLOOR) -> float:
    """Focal loss at probability p with focusing exponent gamma."""
    _check_scalar_prob(p)
    if gamma < 0:
        raise ValueError(f"gamma must be >= 0, got {gamma}")
    return float(focal_values(_clamp(np.float64(p), prob_floor), gamma))


def cewf_scalar(p: float, gamma: float, t: float, prob_floor: float = DEFAULT_PROB_FLOOR) -> float:
    """CEWF loss at probability p; lies in [focal_scalar, ce_scalar]."""
    _check_scalar_prob(p)
    if gamma < 0:
        raise ValueError(f"gamma must be >= 0, got {gamma}")
    if t < 0:
        raise ValueError(f"t must be >= 0, got {t}")
    return float(cewf_values(_clamp(np.float64(p), prob_floor), gamma, t))


def _scalar_values(p: np.ndarray, cfg: LossConfig) -> np.ndarray:
    if cfg.kind == "CE":
        return ce_values(p)
    if cfg.kind == "Focal":
        return focal_values(p, cfg.gamma)
    return cewf_values(p, cfg.gamma, cfg.t)


def _scalar_grads(p: np.ndarray, cfg: LossConfig) -> np.ndarray:
    if cfg.kind == "CE":
        return ce_grad(p)
    if cfg.kind == "Focal":
        return focal_grad(p, cfg.gamma)
    return cewf_grad(p, cfg.gamma, cfg.t)


def softmax_rows(logits: np.ndarray) -> np.ndarray:
    """Row-wise stable softmax of a 2-D array."""
    shifted = logits - logits.max(axis=1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=1, keepdims=True)


def loss_batch(logits, labels: Sequence[int], cfg: LossConfig) -> tuple[LossValue, Tensor]:
    """Batched loss through the softmax, with the analytic logits gradient.

    Returns the mean loss over the batch and d total / d logits.  The CEWF
    weights are treated as functions of p, so the gradient is the literal
    derivative of the blended expression.
    """
    lg = as_array(logits)
    if lg.ndim != 2 or lg.shape[0] == 0:
        raise ValueError(f"loss_batch: expected non-empty B x n logits, got shape {lg.shape}")
    b, n = lg.shape
    lab = np.asarray(labels, dtype=np.int64)
    if lab.shape != (b,):
        raise ValueError(f"loss_batch: expected {b} labels, got shape {lab.shape}")
    if lab.min() < 0 or lab.max() >= n:
        bad = lab[(lab < 0) | (lab >= n)][0]
        raise ValueError(f"loss_batch: label {bad} out of range [0, {n})")

    probs = softmax_rows(lg)
    rows = np.arange(b)
    p_raw = probs[rows, lab]
    p = _clamp(p_raw, cfg.prob_floor)
    per_sample = _scalar_values(p, cfg)
    total = float(per_sample.mean())
    if not np.isfinite(total):
        raise NumericError("loss_batch: non-finite loss value")

    # Clamped samples sit on a flat region of the loss, so their dL/dp is 0.
    inside = (p_raw > cfg.prob_floor) & (p_raw < 1.0 - cfg.prob_floor)
    dldp = np.where(inside, _scalar_grads(p, cfg), 0.0)

    onehot = np.zeros_like(probs)
    onehot[rows, lab] = 1.0
    grad = (dldp * p_raw / b)[:, None] * (onehot - probs)
    return LossValue(total=total, per_sample=per_sample), Tensor(grad)


def emit_curves(
    p_grid: Sequence[float],
    gammas: Sequence[float],
    ts: Sequence[float],
    prob_floor: float = DEFAULT_PROB_FLOOR,
) -> list[tuple[float, float, float, float, float, float]]:
    """Loss values over a probability grid.

    One row (p, gamma, t, ce, focal, cewf) per combination, grid outermost,
    for plotting how the CEWF curve sits between the other two.
    """
    grid = np.asarray(p_grid, dtype=np.float64)
    if grid.size == 0 or grid.min() <= 0.0 or grid.max() >= 1.0:
        raise ValueError("emit_curves: p grid must lie strictly inside (0, 1)")
    if np.any(np.diff(grid) <= 0):
        raise ValueError("emit_curves: p grid must be strictly ascending")
    pc = _clamp(grid, prob_floor)
    rows = []
    for p_val, p in zip(grid.tolist(), pc):
        ce = float(ce_values(p))
        for gamma in gammas:
            focal = float(focal_values(p, gamma))
            for t in ts:
                cewf = float(cewf_values(p, gamma, t))
                rows.append((p_val, float(gamma), float(t), ce, focal, cewf))
    return rows
