"""Time the compiled kernels against the numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat 5] [--samples 1000000]

Prints the best-of-N wall time per kernel and backend, and the speedup.
Results from both backends are checked for agreement before timing.
"""
import argparse
import timeit

import numpy as np

from eprcert import kernels
from eprcert.oracle import DoubleGaussianParams, sample


def cases(n_samples, bins):
    params = DoubleGaussianParams.from_ratio(4.0)
    s = sample(params, n_samples, seed=1)
    half = 5 * params.marginal_std()
    width = 2 * half / bins
    counts, _ = kernels.bin_counts_2d(s.x_a, s.x_b, -half, width, bins, -half, width, bins)
    p = counts / counts.sum()
    return {
        "bin_counts_2d": lambda backend: kernels.bin_counts_2d(
            s.x_a, s.x_b, -half, width, bins, -half, width, bins, backend=backend),
        "bin_counts_2d (periodic)": lambda backend: kernels.bin_counts_2d(
            s.x_a, s.x_b, -half, width, bins, -half, width, bins, True, True, backend=backend),
        "entropy_bits": lambda backend: kernels.entropy_bits(p, backend=backend),
        "joint_and_column_entropy": lambda backend: kernels.joint_and_column_entropy(p, backend=backend),
    }


def _same(x, y):
    if isinstance(x, tuple):
        return all(_same(a, b) for a, b in zip(x, y))
    if isinstance(x, np.ndarray):
        return np.array_equal(x, y)
    return abs(x - y) <= 1e-9 * max(1.0, abs(x))


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--samples", type=int, default=1_000_000)
    ap.add_argument("--bins", type=int, default=256)
    args = ap.parse_args(argv)

    backends = sorted(kernels.BACKENDS)
    if "compiled" not in backends:
        print("compiled extension not built; timing the numpy fallback only")
    print(f"{args.samples} samples, {args.bins}x{args.bins} bins, best of {args.repeat}")
    print(f"{'kernel':<28}" + "".join(f"{b:>12}" for b in backends) + f"{'speedup':>10}")
    for name, fn in cases(args.samples, args.bins).items():
        results = [fn(b) for b in backends]
        if not all(_same(results[0], r) for r in results[1:]):
            raise SystemExit(f"{name}: backends disagree")
        times = {b: min(timeit.repeat(lambda: fn(b), number=1, repeat=args.repeat)) for b in backends}
        line = f"{name:<28}" + "".join(f"{times[b] * 1e3:>10.2f}ms" for b in backends)
        if "compiled" in times:
            line += f"{times['python'] / times['compiled']:>9.1f}x"
        print(line)


if __name__ == "__main__":
    main()
