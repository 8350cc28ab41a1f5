"""Dense float64 arrays and a central-difference gradient checker.

Deliberately small: row-major float64 storage, a handful of deterministic
operations, and the finite-difference verifier that every analytic gradient
in this repo is tested against.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import NumericError, ShapeError

# Relative error denominator is floored here so near-zero gradients do not
# blow the ratio up.
REL_ERR_FLOOR = 1e-8


class Tensor:
    """Dense float64 array with explicit shape, flat row-major storage."""

    __slots__ = ("array",)

    def __init__(self, values, shape: Iterable[int] | None = None):
        arr = np.array(values, dtype=np.float64, order="C")
        if shape is not None:
            arr = arr.reshape(tuple(shape), order="C")
        self.array = arr

    @classmethod
    def zeros(cls, shape: Iterable[int]) -> "Tensor":
        return cls(np.zeros(tuple(shape), dtype=np.float64))

    @property
    def shape(self) -> tuple[int, ...]:
        return self.array.shape

    @property
    def size(self) -> int:
        return self.array.size

    @property
    def data(self) -> np.ndarray:
        """Flat row-major view of the entries."""
        return self.array.reshape(-1)

    def copy(self) -> "Tensor":
        return Tensor(self.array)

    def tolist(self):
        return self.array.tolist()

    def __array__(self, dtype=None):
        return self.array if dtype is None else self.array.astype(dtype)

    def __repr__(self) -> str:
        return f"Tensor(shape={self.shape}, data={self.data.tolist()})"


def as_array(x) -> np.ndarray:
    """Coerce a Tensor or array-like to a float64 ndarray."""
    if isinstance(x, Tensor):
        return x.array
    return np.asarray(x, dtype=np.float64)


def _require_finite(arr: np.ndarray, op: str) -> None:
    if not np.all(np.isfinite(arr)):
        raise NumericError(f"{op}: input contains non-finite entries")


def matmul(a, b) -> Tensor:
    """Matrix product of two 2-D tensors.

    Accumulates over the inner dimension in index order with one rounding
    per multiply and per add, so the result is bit-identical to a naive
    triple loop.
    """
    av, bv = as_array(a), as_array(b)
    if av.ndim != 2 or bv.ndim != 2 or av.shape[1] != bv.shape[0]:
        raise ShapeError(f"matmul: incompatible shapes {av.shape} x {bv.shape}")
    m, k = av.shape
    n = bv.shape[1]
    out = np.zeros((m, n), dtype=np.float64)
    for i in range(k):
        out += av[:, i : i + 1] * bv[i : i + 1, :]
    return Tensor(out)


def softmax(y) -> Tensor:
    """Softmax of a 1-D tensor, computed with max-subtraction."""
    yv = as_array(y)
    if yv.ndim != 1 or yv.size == 0:
        raise ShapeError(f"softmax: expected non-empty 1-D input, got shape {yv.shape}")
    _require_finite(yv, "softmax")
    e = np.exp(yv - yv.max())
    return Tensor(e / e.sum())


def log_softmax(y) -> Tensor:
    """log(softmax(y)) without forming intermediate probabilities."""
    yv = as_array(y)
    if yv.ndim != 1 or yv.size == 0:
        raise ShapeError(f"log_softmax: expected non-empty 1-D input, got shape {yv.shape}")
    _require_finite(yv, "log_softmax")
    shifted = yv - yv.max()
    return Tensor(shifted - np.log(np.exp(shifted).sum()))


def sigmoid(x: np.ndarray) -> np.ndarray:
    """Numerically stable elementwise sigmoid on an ndarray."""
    x = np.asarray(x, dtype=np.float64)
    out = np.empty_like(x)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    return out


_ELEMENTWISE: dict[str, Callable[[np.ndarray], np.ndarray]] = {
    "tanh": np.tanh,
    "sigmoid": sigmoid,
    "relu": lambda x: np.maximum(x, 0.0),
}


def elementwise(name: str, x) -> Tensor:
    """Apply a named activation (tanh, sigmoid, relu) entry by entry."""
    if name not in _ELEMENTWISE:
        raise ValueError(
            f"elementwise: unknown function {name!r}, expected one of {sorted(_ELEMENTWISE)}"
        )
    xv = as_array(x)
    _require_finite(xv, f"elementwise[{name}]")
    return Tensor(_ELEMENTWISE[name](xv))


@dataclass(frozen=True)
class GradCheckReport:
    max_abs_err: float
    max_rel_err: float
    probe_count: int


def grad_check(
    f: Callable[[Tensor], float],
    x: Tensor,
    analytic_grad: Tensor,
    eps: float = 1e-5,
) -> GradCheckReport:
    """Compare an analytic gradient against central differences of ``f``.

    Every coordinate of ``x`` is probed at x +/- eps.  Relative error per
    coordinate is |a - n| / max(1e-8, |a| + |n|).
    """
    if not 0.0 < eps <= 1e-2:
        raise ValueError(f"grad_check: eps must be in (0, 1e-2], got {eps}")
    xa = as_array(x)
    ga = as_array(analytic_grad)
    if xa.shape != ga.shape:
        raise ShapeError(f"grad_check: gradient shape {ga.shape} != input shape {xa.shape}")
    flat = xa.reshape(-1)
    gflat = ga.reshape(-1)
    if flat.size == 0:
        raise ValueError("grad_check: empty input")

    def probe(i: int, delta: float) -> float:
        v = flat.copy()
        v[i] += delta
        out = float(f(Tensor(v.reshape(xa.shape))))
        if not math.isfinite(out):
            raise NumericError(f"grad_check: non-finite function value at probe {i}")
        return out

    max_abs = 0.0
    max_rel = 0.0
    for i in range(flat.size):
        numeric = (probe(i, eps) - probe(i, -eps)) / (2.0 * eps)
        a = float(gflat[i])
        abs_err = abs(a - numeric)
        rel_err = abs_err / max(REL_ERR_FLOOR, abs(a) + abs(numeric))
        max_abs = max(max_abs, abs_err)
        max_rel = max(max_rel, rel_err)
    return GradCheckReport(max_abs_err=max_abs, max_rel_err=max_rel, probe_count=flat.size)
