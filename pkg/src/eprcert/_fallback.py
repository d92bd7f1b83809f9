"""Numpy implementations of the compiled kernels in ``_kernels.pyx``."""
import numpy as np


def entropy_bits(p):
    p = p[p > 0]
    return float(-np.sum(p * np.log2(p)))


def joint_and_column_entropy(p):
    return entropy_bits(p.ravel()), entropy_bits(p.sum(axis=0))


def _bin_index(v, lo, width, n, periodic):
    with np.errstate(invalid="ignore"):
        f = np.floor((v - lo) / width)
    bad = np.isnan(f)
    f = np.where(bad, -1.0, f)
    if periodic:
        f = f - n * np.floor(f / n)
        f = np.where(f >= n, 0.0, f)
        f = np.where(bad, -1.0, f)
    else:
        f = np.where((f < 0) | (f >= n), -1.0, f)
    return f.astype(np.int64)


def bin_counts_2d(a, b, lo_a, width_a, n_a, periodic_a, lo_b, width_b, n_b, periodic_b):
    ia = _bin_index(a, lo_a, width_a, n_a, periodic_a)
    ib = _bin_index(b, lo_b, width_b, n_b, periodic_b)
    keep = (ia >= 0) & (ib >= 0)
    flat = ia[keep] * n_b + ib[keep]
    counts = np.bincount(flat, minlength=n_a * n_b).reshape(n_a, n_b).astype(np.int64)
    return counts, int(a.shape[0] - np.count_nonzero(keep))
