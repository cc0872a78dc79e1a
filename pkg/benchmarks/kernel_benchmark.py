#!/usr/bin/env python3
"""Compare the compiled and pure-numpy kernel backends.

Times one full update cycle (basis update, mixing update, energy data-fit)
per backend across problem sizes and prints a table with the speedup of the
compiled extension over the numpy fallback.

Run from the repository root:

    PYTHONPATH=src python3 benchmarks/kernel_benchmark.py
"""

import argparse
import sys
import time

import numpy as np

from nmfcomm import _kernels_py

try:
    from nmfcomm import _kernels_cy
except ImportError:
    _kernels_cy = None


def make_problem(n, k, seed=0):
    rng = np.random.default_rng(seed)
    v = rng.poisson(1.0, size=(n, n)).astype(float)
    v = np.triu(v, 1)
    v = np.ascontiguousarray(v + v.T)
    w = rng.uniform(1e-12, 1.0, size=(n, k))
    h = rng.uniform(1e-12, 1.0, size=(k, n))
    beta = rng.uniform(0.5, 3.0, size=k)
    return v, w, h, beta


def cycle(impl, v, w, h, beta, eps=1e-12):
    h = impl.multiplicative_update_h(v, w, h, beta, eps)
    w = impl.multiplicative_update_w(v, np.ascontiguousarray(w), np.asarray(h), beta, eps)
    vhat = impl.reconstruct(np.ascontiguousarray(np.asarray(w)), np.asarray(h))
    impl.kl_data_fit(v, np.ascontiguousarray(np.asarray(vhat)), eps)
    return np.asarray(w), np.asarray(h)


def time_backend(impl, v, w, h, beta, iters, repeats):
    cycle(impl, v, w, h, beta)  # warm-up
    samples = []
    for _ in range(repeats):
        wi, hi = w.copy(), h.copy()
        t0 = time.perf_counter()
        for _ in range(iters):
            wi, hi = cycle(impl, v, wi, hi, beta)
        samples.append((time.perf_counter() - t0) / iters)
    return float(np.median(samples))


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sizes", default="64:32,128:64,256:64,512:128",
                        help="comma-separated n:k pairs")
    parser.add_argument("--iters", type=int, default=5, help="cycles per sample")
    parser.add_argument("--repeats", type=int, default=5, help="samples per size")
    args = parser.parse_args()

    sizes = []
    for tok in args.sizes.split(","):
        n, k = tok.split(":")
        sizes.append((int(n), int(k)))

    if _kernels_cy is None:
        print("compiled backend not built (python setup.py build_ext --inplace)")

    header = f"{'n':>5} {'k':>5} {'pure ms/iter':>14}"
    if _kernels_cy is not None:
        header += f" {'compiled ms/iter':>18} {'speedup':>9}"
    print(header)
    for n, k in sizes:
        v, w, h, beta = make_problem(n, k)
        t_py = time_backend(_kernels_py, v, w, h, beta, args.iters, args.repeats)
        row = f"{n:>5} {k:>5} {t_py * 1e3:>14.2f}"
        if _kernels_cy is not None:
            t_cy = time_backend(_kernels_cy, v, w, h, beta, args.iters, args.repeats)
            row += f" {t_cy * 1e3:>18.2f} {t_py / t_cy:>8.2f}x"
        print(row)
    return 0


if __name__ == "__main__":
    sys.exit(main())
