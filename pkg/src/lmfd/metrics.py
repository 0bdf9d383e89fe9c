"""Rank transformation and Spearman's rank correlation.

Monotonicity of a series is defined as the absolute Spearman correlation
between the series and its time index; it is the quantity every candidate
equation is scored on.  Because ranks are invariant under strictly monotone
transforms, whole families of equations share one score, which is what makes
the canonical grammar sound.
"""

from __future__ import annotations

import numpy as np

from . import _kernels
from .errors import LengthMismatch, NonFiniteInput


def _as_series(x, name: str) -> np.ndarray:
    arr = np.ascontiguousarray(x, dtype=np.float64)
    if arr.ndim != 1:
        raise LengthMismatch(f"{name} must be one-dimensional, got shape {arr.shape}")
    if not np.isfinite(arr).all():
        raise NonFiniteInput(f"{name} contains non-finite values")
    return arr


def rank(x) -> np.ndarray:
    """Ascending fractional ranks of ``x``, 1-based.

    Tied values receive the average of the positions they span, so the rank
    sum is always n(n+1)/2.  Sort-based, O(n log n).
    """
    arr = _as_series(x, "x")
    if arr.shape[0] < 1:
        raise LengthMismatch("rank needs at least 1 value")
    return _kernels.rank_avg(arr)


def spearman_rho(x, t) -> float:
    """Spearman's rank correlation: the Pearson correlation of the rank vectors.

    Returns exactly 0.0 when either rank vector has zero variance (a constant
    input carries no ordinal information).
    """
    xa = _as_series(x, "x")
    ta = _as_series(t, "t")
    if xa.shape[0] != ta.shape[0]:
        raise LengthMismatch(f"series lengths differ: {xa.shape[0]} vs {ta.shape[0]}")
    if xa.shape[0] < 2:
        raise LengthMismatch("spearman_rho needs at least 2 points")
    return float(_kernels.pearson(_kernels.rank_avg(xa), _kernels.rank_avg(ta)))


def abs_monotonicity(x) -> float:
    """|Spearman's rho| between ``x`` and its positional order 0..n-1.

    1.0 means perfectly monotone (either direction), 0.0 no ordinal trend.
    """
    arr = _as_series(x, "x")
    if arr.shape[0] < 2:
        raise LengthMismatch("abs_monotonicity needs at least 2 points")
    return abs(float(_kernels.spearman_vs_index(arr)))
