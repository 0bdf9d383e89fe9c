"""Benchmark the compiled kernels against the numpy fallback.

Usage:
    python benchmarks/bench_kernels.py [--n 1000 4000 16000] [--repeats 200]

Times the four hot kernels on random data at several series lengths, plus one
full constant fit through whichever backend is active.  The compiled path is
loaded directly, so this runs regardless of the LMFD_BACKEND setting.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from lmfd import FitBudget, fit_constants, get_structure
from lmfd._kernels import BACKEND, numpy_backend

try:
    from lmfd._kernels import _native
except ImportError:
    _native = None


def best_of(repeats: int, fn, *args) -> float:
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - start)
    return best


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n", type=int, nargs="+", default=[1000, 4000, 16000])
    parser.add_argument("--repeats", type=int, default=200)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    if _native is None:
        print("compiled kernels unavailable; showing the numpy fallback only")
    rng = np.random.Generator(np.random.PCG64(args.seed))

    print(f"{'kernel':<20}{'n':>8}{'python':>12}{'native':>12}{'speedup':>9}")
    for n in args.n:
        x = rng.standard_normal(n)
        y = rng.standard_normal(n)
        span = max(2, n // 20)
        cases = [
            ("rank_avg", (x,)),
            ("pearson", (x, y)),
            ("spearman_vs_index", (x,)),
            ("ewma_imputed", (x, span)),
        ]
        for name, call_args in cases:
            py = best_of(args.repeats, getattr(numpy_backend, name), *call_args)
            line = f"{name:<20}{n:>8}{py * 1e6:>10.1f}us"
            if _native is not None:
                nat = best_of(args.repeats, getattr(_native, name), *call_args)
                line += f"{nat * 1e6:>10.1f}us{py / nat:>8.1f}x"
            print(line)

    n = args.n[0]
    s1 = rng.standard_normal(n) + np.arange(n) / n
    s2 = rng.standard_normal(n)
    structure = get_structure(4)  # two continuous constants
    start = time.perf_counter()
    fit_constants(structure, s1, s2, FitBudget(max_evaluations=200, seed=1))
    elapsed = time.perf_counter() - start
    print(f"\nfull 200-evaluation fit at n={n} via {BACKEND!r} backend: {elapsed * 1e3:.1f} ms")


if __name__ == "__main__":
    main()
