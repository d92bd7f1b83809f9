# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled inner loops. Must stay call-compatible with ``_fallback``."""
import numpy as np

cimport numpy as cnp
from libc.math cimport floor, log2

cnp.import_array()


cdef inline double _neg_plogp(double p) nogil:
    if p > 0.0:
        return -p * log2(p)
    return 0.0


def entropy_bits(const double[::1] p):
    cdef Py_ssize_t i, n = p.shape[0]
    cdef double acc = 0.0
    with nogil:
        for i in range(n):
            acc += _neg_plogp(p[i])
    return acc


def joint_and_column_entropy(const double[:, ::1] p):
    """Return (H(rows, cols), H(cols)) of a joint table in one sweep."""
    cdef Py_ssize_t i, j, na = p.shape[0], nb = p.shape[1]
    cdef double joint = 0.0, marginal = 0.0, v
    cdef double[::1] col = np.zeros(nb, dtype=np.float64)
    with nogil:
        for i in range(na):
            for j in range(nb):
                v = p[i, j]
                col[j] += v
                joint += _neg_plogp(v)
        for j in range(nb):
            marginal += _neg_plogp(col[j])
    return joint, marginal


cdef inline Py_ssize_t _bin_index(double v, double lo, double width,
                                  Py_ssize_t n, bint periodic) nogil:
    cdef double f = floor((v - lo) / width)
    cdef Py_ssize_t k
    if f != f:
        return -1
    if periodic:
        f = f - n * floor(f / n)
        k = <Py_ssize_t>f
        if k >= n:
            k = 0
        return k
    if f < 0 or f >= n:
        return -1
    return <Py_ssize_t>f


def bin_counts_2d(const double[::1] a, const double[::1] b,
                  double lo_a, double width_a, Py_ssize_t n_a, bint periodic_a,
                  double lo_b, double width_b, Py_ssize_t n_b, bint periodic_b):
    """Histogram paired samples onto a uniform grid; returns (counts, dropped)."""
    cdef Py_ssize_t i, ia, ib, m = a.shape[0]
    cdef Py_ssize_t dropped = 0
    counts_arr = np.zeros((n_a, n_b), dtype=np.int64)
    cdef cnp.int64_t[:, ::1] counts = counts_arr
    with nogil:
        for i in range(m):
            ia = _bin_index(a[i], lo_a, width_a, n_a, periodic_a)
            ib = _bin_index(b[i], lo_b, width_b, n_b, periodic_b)
            if ia < 0 or ib < 0:
                dropped += 1
            else:
                counts[ia, ib] += 1
    return counts_arr, dropped
