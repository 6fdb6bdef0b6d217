"""Time the memory convolution with the compiled and NumPy backends.

    python benchmarks/bench_history.py [--points 4001] [--repeat 3]

The default size matches a reference run: 2000 steps refined to 4001 grid
points, 2 channels x 2 qubits x 16 matrix entries = 64 columns.
"""

import argparse
import sys
import timeit

import numpy as np

from cdd_swap import _history_py

try:
    from cdd_swap import _history_ext
except ImportError:
    _history_ext = None


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--points", type=int, default=4001)
    p.add_argument("--columns", type=int, default=64)
    p.add_argument("--repeat", type=int, default=3)
    args = p.parse_args(argv)

    rng = np.random.default_rng(0)
    h = 1.0 / (args.points - 1)
    t = h * np.arange(args.points)
    kernel = np.exp(-3 * t) / (1 + 1j * t) ** 2
    ops = rng.normal(size=(args.points, args.columns)) + 1j * rng.normal(size=(args.points, args.columns))

    impls = {"python": _history_py.history_convolution}
    if _history_ext is None:
        print("compiled extension not built; timing the NumPy fallback only", file=sys.stderr)
    else:
        impls["cython"] = _history_ext.history_convolution

    results = {}
    for name, fn in impls.items():
        best = min(timeit.repeat(lambda: fn(kernel, ops, h), number=1, repeat=args.repeat))
        results[name] = (best, fn(kernel, ops, h))
        print(f"{name:7s} {best:8.3f} s  (K={args.points}, d={args.columns})")

    if len(results) == 2:
        ref = results["python"][1]
        diff = np.abs(results["cython"][1] - ref).max() / np.abs(ref).max()
        print(f"speedup {results['python'][0] / results['cython'][0]:.2f}x, "
              f"max relative difference {diff:.1e}")


if __name__ == "__main__":
    main()
