"""Time the compiled kernels against the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Prints one line per kernel with the best-of-repeat time of each backend, the
speed-up, and the largest relative difference between the two results.
"""

import argparse
import timeit

import numpy as np

from qonsager import _pykernels as py

try:
    from qonsager import _ckernels as cy
except ImportError:  # extension not built
    cy = None


def cases(rng):
    q = 0.9 + 0.02j
    z = np.exp(1j * rng.uniform(-np.pi, np.pi, 2000))
    a, b, c, d = 0.5 + 0.1j, 0.3 - 0.2j, 0.4j, -0.6
    args = rng.uniform(-0.9, 0.9, 2000) + 1j * rng.uniform(-0.9, 0.9, 2000)
    up = (q ** -6, 0.3 + 0.1j, 0.5)
    lo = (0.2, -0.4j, 0.7)
    return {
        "aw_poly_array deg 6, 2000 points": lambda k: k.aw_poly_array(6, z, a, b, c, d, q * q),
        "aw_poly scalar deg 8 x 200": lambda k: [k.aw_poly(8, zi, a, b, c, d, q * q) for zi in z[:200]],
        "qpoch_inf_array 2000 points": lambda k: k.qpoch_inf_array(args, q, 1e-18, 20000),
        "qsum_divfree deg 20 x 500": lambda k: [k.qsum_divfree(up, lo, q, 1.0 + 0j, 20) for _ in range(500)],
        "sum_divfree deg 20 x 500": lambda k: [k.sum_divfree((-20.0, 3.5), (1.5,), 0.3 + 0j, 20) for _ in range(500)],
    }


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    if cy is None:
        print("compiled extension not available; only the Python timings are shown")
    print(f"{'kernel':38s} {'python [ms]':>12s} {'cython [ms]':>12s} {'speed-up':>9s} {'rel. diff':>11s}")
    for name, fn in cases(np.random.default_rng(args.seed)).items():
        tp = min(timeit.repeat(lambda: fn(py), number=1, repeat=args.repeat)) * 1e3
        if cy is None:
            print(f"{name:38s} {tp:12.3f}")
            continue
        tc = min(timeit.repeat(lambda: fn(cy), number=1, repeat=args.repeat)) * 1e3
        a, b = np.asarray(fn(py)), np.asarray(fn(cy))
        diff = float(np.max(np.abs(a - b) / np.maximum(np.abs(a), 1e-300)))
        print(f"{name:38s} {tp:12.3f} {tc:12.3f} {tp / tc:9.1f} {diff:11.2e}")


if __name__ == "__main__":
    main()
