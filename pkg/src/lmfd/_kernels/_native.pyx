# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled implementations of the hot kernels.

Contracts mirror ``lmfd._kernels.numpy_backend`` exactly; the expensive parts
(tie grouping, recurrence filtering, correlation sums) run as C loops.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport exp, sqrt

cnp.import_array()


def rank_avg(x):
    """Ascending fractional ranks, 1-based; ties share the mean of their positions."""
    cdef cnp.ndarray[cnp.float64_t, ndim=1] xv = np.ascontiguousarray(x, dtype=np.float64)
    cdef Py_ssize_t n = xv.shape[0]
    cdef cnp.ndarray[cnp.intp_t, ndim=1] order = np.argsort(xv, kind="stable")
    cdef cnp.ndarray[cnp.float64_t, ndim=1] ranks = np.empty(n, dtype=np.float64)
    cdef Py_ssize_t i = 0, j, k
    cdef double avg
    while i < n:
        j = i
        while j + 1 < n and xv[order[j + 1]] == xv[order[i]]:
            j += 1
        # run [i, j] occupies positions i+1 .. j+1, whose mean is (i + j + 2) / 2
        avg = 0.5 * (i + j + 2.0)
        for k in range(i, j + 1):
            ranks[order[k]] = avg
        i = j + 1
    return ranks


def pearson(a, b):
    """Pearson correlation; exactly 0.0 when either input has zero variance."""
    cdef cnp.ndarray[cnp.float64_t, ndim=1] av = np.ascontiguousarray(a, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] bv = np.ascontiguousarray(b, dtype=np.float64)
    return _pearson(av, bv)


cdef double _pearson(double[::1] a, double[::1] b):
    cdef Py_ssize_t n = a.shape[0]
    cdef Py_ssize_t i
    cdef double ma = 0.0, mb = 0.0, va = 0.0, vb = 0.0, cov = 0.0, da, db, r
    for i in range(n):
        ma += a[i]
        mb += b[i]
    ma /= n
    mb /= n
    for i in range(n):
        da = a[i] - ma
        db = b[i] - mb
        va += da * da
        vb += db * db
        cov += da * db
    if va == 0.0 or vb == 0.0:
        return 0.0
    r = cov / sqrt(va * vb)
    if r > 1.0:
        r = 1.0
    elif r < -1.0:
        r = -1.0
    return r


def spearman_vs_index(x):
    """Spearman correlation of a series against its own positional order."""
    cdef cnp.ndarray[cnp.float64_t, ndim=1] ranks = rank_avg(x)
    cdef Py_ssize_t n = ranks.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] idx = np.arange(1.0, n + 1.0)
    return _pearson(ranks, idx)


def ewma_imputed(x, span):
    """Causal windowed exponential moving average with undefined-prefix imputation."""
    cdef cnp.ndarray[cnp.float64_t, ndim=1] xv = np.ascontiguousarray(x, dtype=np.float64)
    cdef Py_ssize_t n = xv.shape[0]
    cdef Py_ssize_t sp = span
    cdef cnp.ndarray[cnp.float64_t, ndim=1] y = np.empty(n, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] s_inf
    cdef Py_ssize_t t
    cdef double q, qs, w, s, mean
    if sp == 1:
        for t in range(1, n):
            y[t] = xv[t]
    else:
        q = exp(-2.0 / (sp - 1))
        s_inf = np.empty(n, dtype=np.float64)
        s = 0.0
        for t in range(n):
            s = xv[t] + q * s
            s_inf[t] = s
        qs = q**sp
        w = (1.0 - qs) / (1.0 - q)
        for t in range(sp, n):
            y[t] = (s_inf[t] - qs * s_inf[t - sp]) / w
    mean = 0.0
    for t in range(sp, n):
        mean += y[t]
    mean /= n - sp
    for t in range(sp):
        y[t] = mean
    return y
