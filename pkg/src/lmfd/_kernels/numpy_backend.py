"""Pure numpy implementations of the hot kernels.

Selected automatically when the compiled extension is unavailable (or when
forced via ``LMFD_BACKEND=python``).  Function contracts mirror
``lmfd._kernels._native`` exactly.
"""

from __future__ import annotations

import numpy as np
from scipy.signal import lfilter


def rank_avg(x: np.ndarray) -> np.ndarray:
    """Ascending fractional ranks, 1-based; ties share the mean of their positions."""
    x = np.ascontiguousarray(x, dtype=np.float64)
    n = x.shape[0]
    order = np.argsort(x, kind="stable")
    sx = x[order]
    # group boundaries: index of each run start, plus the end sentinel
    bounds = np.flatnonzero(np.r_[True, sx[1:] != sx[:-1], True])
    # run [i, j) occupies positions i+1 .. j, whose mean is (i + j + 1) / 2
    avg = 0.5 * (bounds[:-1] + bounds[1:] + 1.0)
    ranks = np.empty(n, dtype=np.float64)
    ranks[order] = np.repeat(avg, np.diff(bounds))
    return ranks


def pearson(a: np.ndarray, b: np.ndarray) -> float:
    """Pearson correlation; exactly 0.0 when either input has zero variance."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    da = a - a.mean()
    db = b - b.mean()
    va = float(np.dot(da, da))
    vb = float(np.dot(db, db))
    if va == 0.0 or vb == 0.0:
        return 0.0
    r = float(np.dot(da, db)) / np.sqrt(va * vb)
    return float(min(1.0, max(-1.0, r)))


def spearman_vs_index(x: np.ndarray) -> float:
    """|rho|-free Spearman of a series against its own positional order.

    The index ranks are exactly 1..n, so only the series needs ranking.
    """
    n = x.shape[0]
    return pearson(rank_avg(x), np.arange(1.0, n + 1.0))


def ewma_imputed(x: np.ndarray, span: int) -> np.ndarray:
    """Causal windowed exponential moving average with undefined-prefix imputation.

    For t >= span the output is the normalized weighted sum of the last
    ``span`` values with weights e^(-lambda*m), lambda = 2/(span-1).  The
    first ``span`` positions, where the window would reach before the start
    of the series, are set to the mean of the computed part.
    """
    x = np.ascontiguousarray(x, dtype=np.float64)
    n = x.shape[0]
    y = np.empty(n, dtype=np.float64)
    if span == 1:
        y[1:] = x[1:]
    else:
        q = float(np.exp(-2.0 / (span - 1)))
        # s_inf[t] = sum_{m<=t} q^m x[t-m]; window sum via tail subtraction
        s_inf = lfilter([1.0], [1.0, -q], x)
        qs = q**span
        w = (1.0 - qs) / (1.0 - q)
        y[span:] = (s_inf[span:] - qs * s_inf[:-span]) / w
    y[:span] = y[span:].mean()
    return y
