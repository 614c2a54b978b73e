#!/usr/bin/env python3
"""Benchmark the compiled kernels against the NumPy fallback.

Runs each hot kernel on desk-scale inputs with both backends, checks the
outputs are bitwise identical, and prints a timing table.

Usage: python benchmarks/bench_kernels.py [--limit 10000000] [--repeat 3]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from h8.kernels import _py

try:
    from h8.kernels import _ext
except ImportError:
    _ext = None


def best_of(fn, repeat: int) -> tuple[float, object]:
    best = float("inf")
    result = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - t0)
    return best, result


def main() -> None:
    parser = argparse.ArgumentParser()
    parser.add_argument("--limit", type=int, default=10 ** 7)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    if _ext is None:
        print("compiled extension not built; run pip install -e . first")
        return

    limit = args.limit
    flags = _py.sieve_flags(limit, 1 << 20)
    primes = np.flatnonzero(flags).astype(np.int64)
    logs = np.log(primes.astype(np.float64))
    scan_hi = min(limit, 10 ** 6)
    shifts = (scan_hi - primes[(primes > 2) & (primes < scan_hi)]).astype(np.int64)
    small = primes[primes < 100]

    cases = [
        (f"sieve_flags({limit:.0e})",
         lambda impl: impl.sieve_flags(limit, 1 << 20)),
        (f"unpaired_evens([6, {scan_hi:.0e}])",
         lambda impl: impl.unpaired_evens(flags, 6, scan_hi)),
        ("residue_logsums q=2..1000",
         lambda impl: np.concatenate([impl.residue_logsums(primes, logs, q)
                                      for q in range(2, 1001)])),
        ("survivor_mask z=100",
         lambda impl: impl.survivor_mask(shifts, small)),
    ]

    print(f"{'kernel':<34} {'numpy':>10} {'compiled':>10} {'speedup':>8}")
    for name, runner in cases:
        t_py, r_py = best_of(lambda: runner(_py), args.repeat)
        t_ext, r_ext = best_of(lambda: runner(_ext), args.repeat)
        identical = np.array_equal(np.asarray(r_py), np.asarray(r_ext))
        flag = "" if identical else "  OUTPUT MISMATCH"
        print(f"{name:<34} {t_py * 1e3:>8.1f}ms {t_ext * 1e3:>8.1f}ms "
              f"{t_py / t_ext:>7.2f}x{flag}")


if __name__ == "__main__":
    main()
