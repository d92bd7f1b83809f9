"""Backend selection for the hot loops.

The compiled ``_kernels`` extension is used when it imports; otherwise the
numpy versions in ``_fallback`` are used. Setting ``EPRCERT_PURE_PYTHON=1``
forces the fallback. Both backends take contiguous float64 input; the
wrappers here do the coercion so callers never have to.
"""
import os

import numpy as np

from . import _fallback

try:
    if os.environ.get("EPRCERT_PURE_PYTHON"):
        raise ImportError("compiled kernels disabled by EPRCERT_PURE_PYTHON")
    from . import _kernels as _compiled
except ImportError:
    _compiled = None

BACKENDS = {"python": _fallback}
if _compiled is not None:
    BACKENDS["compiled"] = _compiled

BACKEND = "compiled" if _compiled is not None else "python"


def _impl(backend):
    return BACKENDS[backend or BACKEND]


def entropy_bits(p, backend=None):
    """Shannon entropy in bits of the flattened array ``p`` (0 log 0 = 0)."""
    p = np.ascontiguousarray(p, dtype=np.float64).ravel()
    return float(_impl(backend).entropy_bits(p))


def joint_and_column_entropy(p, backend=None):
    p = np.ascontiguousarray(p, dtype=np.float64)
    joint, marginal = _impl(backend).joint_and_column_entropy(p)
    return float(joint), float(marginal)


def bin_counts_2d(a, b, lo_a, width_a, n_a, lo_b, width_b, n_b,
                  periodic_a=False, periodic_b=False, backend=None):
    """Histogram paired samples into ``n_a x n_b`` half-open uniform bins.

    ``lo_*`` is the left edge of bin 0. Periodic axes wrap with period
    ``n * width``. Returns ``(counts, dropped)`` where ``dropped`` counts
    pairs with either coordinate outside a non-periodic range or NaN.
    """
    a = np.ascontiguousarray(a, dtype=np.float64)
    b = np.ascontiguousarray(b, dtype=np.float64)
    if a.shape != b.shape or a.ndim != 1:
        raise ValueError("sample arrays must be 1-D and of equal length")
    counts, dropped = _impl(backend).bin_counts_2d(
        a, b, float(lo_a), float(width_a), int(n_a), bool(periodic_a),
        float(lo_b), float(width_b), int(n_b), bool(periodic_b))
    return np.asarray(counts, dtype=np.int64), int(dropped)
