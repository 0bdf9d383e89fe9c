"""Evaluate equation structures over bound sensor series."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .errors import IncompleteBinding, LengthMismatch, SpanOutOfRange
from .grammar import (
    Add,
    Div,
    EquationStructure,
    Ewma,
    Exp,
    ExprNode,
    Mul,
    Scale,
    Sensor,
    Sigmoid,
)


@dataclass(frozen=True)
class EwmaKernel:
    """The exponential decay kernel for a given window span.

    The window is span = 2*tau + 1 points wide, where tau = 1/lambda is the
    decay's center of mass; span = 1 degenerates to the identity weight.
    """

    span: int
    tau: float = field(init=False)
    lam: float = field(init=False)

    def __post_init__(self):
        if self.span < 1:
            raise SpanOutOfRange(f"span must be >= 1, got {self.span}")
        tau = (self.span - 1) / 2.0
        object.__setattr__(self, "tau", tau)
        object.__setattr__(self, "lam", 1.0 / tau if tau > 0 else math.inf)

    @property
    def weights(self) -> np.ndarray:
        """Normalized weights w(m) = e^(-lambda*m) for m = 0..span-1, newest first."""
        if self.span == 1:
            return np.ones(1)
        w = np.exp(-self.lam * np.arange(self.span))
        return w / w.sum()


def ewma(x, span: int) -> np.ndarray:
    """Causal exponentially weighted moving average over a finite window.

    For t >= span, y[t] is the kernel-weighted sum of x[t-span+1..t].  The
    first ``span`` positions, where the window would reach before the start
    of the data, are undefined for a causal kernel; they are imputed with the
    mean of the computed part.  That constant prefix caps how monotonic the
    output can be, penalizing overly large windows.
    """
    x = np.ascontiguousarray(x, dtype=np.float64)
    n = x.shape[0]
    span = int(span)
    if not 1 <= span <= n - 1:
        raise SpanOutOfRange(f"span must lie in [1, {n - 1}] for n = {n}, got {span}")
    return _kernels.ewma_imputed(x, span)


@dataclass(frozen=True)
class Binding:
    """Sensor series and constant values instantiating one structure."""

    s1: np.ndarray | None = None
    s2: np.ndarray | None = None
    constants: dict = field(default_factory=dict)

    def series(self, role: str) -> np.ndarray:
        value = self.s1 if role == "s1" else self.s2
        if value is None:
            raise IncompleteBinding(f"no series bound for role {role}")
        return np.asarray(value, dtype=np.float64)

    def constant(self, slot_id: str):
        try:
            return self.constants[slot_id]
        except KeyError:
            raise IncompleteBinding(f"no value bound for constant {slot_id}") from None


def _eval_node(node: ExprNode, binding: Binding, n: int) -> np.ndarray:
    if isinstance(node, Sensor):
        return binding.series(node.role)
    if isinstance(node, Sigmoid):
        child = _eval_node(node.child, binding, n)
        return 1.0 / (1.0 + np.exp(-child))
    if isinstance(node, Exp):
        child = _eval_node(node.child, binding, n)
        return np.exp(float(binding.constant(node.scale.id)) * child)
    if isinstance(node, Ewma):
        child = _eval_node(node.child, binding, n)
        span = int(binding.constant(node.span.id))
        node.span.check(span, n)
        return _kernels.ewma_imputed(np.ascontiguousarray(child), span)
    if isinstance(node, Scale):
        return float(binding.constant(node.coeff.id)) * _eval_node(node.child, binding, n)
    left = _eval_node(node.left, binding, n)
    right = _eval_node(node.right, binding, n)
    if isinstance(node, Add):
        return left + right
    if isinstance(node, Mul):
        return left * right
    assert isinstance(node, Div)
    return left / right


def evaluate(structure: EquationStructure, binding: Binding) -> tuple[np.ndarray, bool]:
    """Evaluate ``structure`` elementwise under ``binding``.

    Returns (series, valid).  ``valid`` is False when any output element is
    non-finite (division by zero, exp overflow); the series is still returned
    for diagnostics.  Overflow is not clamped: clamping would create
    artificial ties that distort the rank statistics.
    """
    lengths = set()
    for role in structure.roles:
        lengths.add(binding.series(role).shape[0])
    if len(lengths) > 1:
        raise LengthMismatch(f"bound series lengths differ: {sorted(lengths)}")
    n = lengths.pop() if lengths else 0
    for slot in structure.slots:
        value = binding.constant(slot.id)
        slot.check(value, n)
    with np.errstate(over="ignore", invalid="ignore", divide="ignore", under="ignore"):
        series = _eval_node(structure.root, binding, n)
    series = np.asarray(series, dtype=np.float64)
    valid = bool(np.isfinite(series).all())
    return series, valid
