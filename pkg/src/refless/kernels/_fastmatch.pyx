# cython: boundscheck=False, wraparound=False, cdivision=True
# cython: language_level=3
"""Compiled similarity kernels.

The dense products go through the same BLAS numpy uses; the compiled
code fuses everything around them: row normalization in one pass, and a
single clamp+maxima scan over the product instead of separate clip and
reduction passes. Semantics match `pyfallback`: rows are L2-normalized,
zero-norm rows keep cosine 0, entries clamped to [-1, 1].
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport sqrt

cnp.import_array()

BACKEND_NAME = "compiled"


cdef void _normalize_rows(double[:, ::1] a) noexcept nogil:
    cdef Py_ssize_t i, k
    cdef double s, inv
    for i in range(a.shape[0]):
        s = 0.0
        for k in range(a.shape[1]):
            s += a[i, k] * a[i, k]
        if s > 0.0:
            inv = 1.0 / sqrt(s)
            for k in range(a.shape[1]):
                a[i, k] *= inv


cdef inline double _clamp(double s) noexcept nogil:
    if s > 1.0:
        return 1.0
    if s < -1.0:
        return -1.0
    return s


def unit_rows(a):
    """Return a float64 copy of `a` with unit-norm rows (zero rows kept)."""
    out = np.array(a, dtype=np.float64, order="C", copy=True)
    if out.ndim != 2:
        raise ValueError("expected a 2-D array")
    cdef double[:, ::1] view = out
    with nogil:
        _normalize_rows(view)
    return out


def cosine_matrix(a, b):
    """Cosine similarities between all rows of `a` and all rows of `b`."""
    s = np.matmul(unit_rows(a), unit_rows(b).T)
    cdef double[:, ::1] sv = s
    cdef Py_ssize_t i, j
    with nogil:
        for i in range(sv.shape[0]):
            for j in range(sv.shape[1]):
                sv[i, j] = _clamp(sv[i, j])
    return s


def match_maxima(ref, summ):
    """Row and column maxima of the ref-vs-summary cosine matrix."""
    s = np.matmul(unit_rows(ref), unit_rows(summ).T)
    cdef double[:, ::1] sv = s
    cdef Py_ssize_t m = sv.shape[0], n = sv.shape[1]
    row_max = np.full(m, -np.inf, dtype=np.float64)
    col_max = np.full(n, -np.inf, dtype=np.float64)
    cdef double[::1] rm = row_max
    cdef double[::1] cm = col_max
    cdef Py_ssize_t i, j
    cdef double v
    with nogil:
        for i in range(m):
            for j in range(n):
                v = _clamp(sv[i, j])
                if v > rm[i]:
                    rm[i] = v
                if v > cm[j]:
                    cm[j] = v
    return row_max, col_max


def self_masked_maxima(x):
    """For each row, the maximum cosine similarity to any other row."""
    u = unit_rows(x)
    if u.shape[0] < 2:
        raise ValueError("self_masked_maxima needs at least two rows")
    s = np.matmul(u, u.T)
    cdef double[:, ::1] sv = s
    cdef Py_ssize_t n = sv.shape[0]
    out = np.full(n, -np.inf, dtype=np.float64)
    cdef double[::1] om = out
    cdef Py_ssize_t i, j
    cdef double v
    with nogil:
        for i in range(n):
            for j in range(i + 1, n):
                v = _clamp(sv[i, j])
                if v > om[i]:
                    om[i] = v
                if v > om[j]:
                    om[j] = v
    return out
