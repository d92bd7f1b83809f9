import math
import os
import subprocess
import sys

import numpy as np
import pytest

from eprcert import kernels


@pytest.mark.skipif(bool(os.environ.get("EPRCERT_PURE_PYTHON")), reason="fallback forced")
def test_compiled_backend_is_built():
    # The package is expected to be installed with its extension in CI.
    assert "compiled" in kernels.BACKENDS, "Cython kernels failed to build"
    assert kernels.BACKEND == "compiled"


def test_pure_python_switch():
    code = "from eprcert import kernels; print(kernels.BACKEND, sorted(kernels.BACKENDS))"
    env = dict(os.environ, EPRCERT_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.split() == ["python", "['python']"]


def test_entropy_bits_matches_definition(backend, rng):
    p = rng.random(1000)
    p[rng.random(1000) < 0.2] = 0.0
    p /= p.sum()
    expected = -math.fsum(v * math.log2(v) for v in p if v > 0)
    assert kernels.entropy_bits(p, backend=backend) == pytest.approx(expected, abs=1e-12)


def test_joint_and_column_entropy(backend, rng):
    p = rng.random((37, 23)) ** 3
    p /= p.sum()
    joint, col = kernels.joint_and_column_entropy(p, backend=backend)
    col_p = p.sum(axis=0)
    assert joint == pytest.approx(-np.sum(p * np.log2(p)), abs=1e-12)
    assert col == pytest.approx(-np.sum(col_p * np.log2(col_p)), abs=1e-12)


def test_backends_agree_on_entropies(rng):
    if len(kernels.BACKENDS) < 2:
        pytest.skip("only one backend available")
    p = rng.random((64, 64))
    p[p < 0.3] = 0
    p /= p.sum()
    a = kernels.joint_and_column_entropy(p, backend="compiled")
    b = kernels.joint_and_column_entropy(p, backend="python")
    assert a == pytest.approx(b, abs=1e-12)


def test_bin_counts_match_numpy_histogram(backend, rng):
    a = rng.normal(0, 2, 50_000)
    b = 0.5 * a + rng.normal(0, 1, 50_000)
    counts, dropped = kernels.bin_counts_2d(a, b, -4.0, 0.25, 32, -3.0, 0.5, 12, backend=backend)
    ref, _, _ = np.histogram2d(a, b, bins=[-4 + 0.25 * np.arange(33), -3 + 0.5 * np.arange(13)])
    inside = (a >= -4) & (a < 4) & (b >= -3) & (b < 3)
    np.testing.assert_array_equal(counts, ref.astype(np.int64))
    assert dropped == np.count_nonzero(~inside)


def test_bin_counts_periodic_wrap(backend):
    width = 2 * math.pi / 8
    lo = -math.pi
    theta = np.array([-math.pi, math.pi - 1e-9, math.pi + 0.1, -math.pi - 0.1, 3 * math.pi + 0.05])
    other = np.zeros_like(theta)
    counts, dropped = kernels.bin_counts_2d(theta, other, lo, width, 8, -0.5, 1.0, 1,
                                            periodic_a=True, backend=backend)
    assert dropped == 0
    assert counts[:, 0].tolist() == [3, 0, 0, 0, 0, 0, 0, 2]


def test_bin_counts_drop_nan(backend):
    a = np.array([0.1, np.nan, 0.2])
    counts, dropped = kernels.bin_counts_2d(a, a, 0.0, 1.0, 1, 0.0, 1.0, 1, backend=backend)
    assert dropped == 1 and counts[0, 0] == 2


def test_backends_bin_identically(rng):
    if len(kernels.BACKENDS) < 2:
        pytest.skip("only one backend available")
    a, b = rng.normal(size=(2, 200_000))
    args = (a, b, -3.3, 0.07, 97, -2.9, 0.11, 53)
    c1, d1 = kernels.bin_counts_2d(*args, backend="compiled")
    c2, d2 = kernels.bin_counts_2d(*args, backend="python")
    np.testing.assert_array_equal(c1, c2)
    assert d1 == d2
