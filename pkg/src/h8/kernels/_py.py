"""NumPy implementations of the hot kernels.

These are the fallback used when the compiled extension is unavailable.
Both backends must produce bitwise-identical arrays: `residue_logsums`
accumulates in input order (np.bincount is a sequential C loop), so float
results match the extension's loop exactly.
"""

from __future__ import annotations

import numpy as np


def sieve_flags(limit: int, segment_size: int = 1 << 20) -> np.ndarray:
    """Segmented sieve of Eratosthenes; flags[n] = 1 iff n is prime, n <= limit."""
    flags = np.zeros(limit + 1, dtype=np.uint8)
    if limit < 2:
        return flags
    root = int(limit ** 0.5)
    while (root + 1) * (root + 1) <= limit:
        root += 1
    # dense base sieve up to sqrt(limit)
    base = np.ones(root + 1, dtype=np.uint8)
    base[:2] = 0
    for p in range(2, int(root ** 0.5) + 1):
        if base[p]:
            base[p * p:: p] = 0
    base_primes = np.flatnonzero(base)
    flags[2: root + 1] = base[2:]
    lo = root + 1
    while lo <= limit:
        hi = min(lo + segment_size, limit + 1)
        seg = np.ones(hi - lo, dtype=np.uint8)
        for p in base_primes:
            p = int(p)
            start = max(p * p, ((lo + p - 1) // p) * p)
            if start < hi:
                seg[start - lo:: p] = 0
        flags[lo:hi] = seg
        lo = hi
    return flags


def residue_logsums(ns: np.ndarray, ws: np.ndarray, q: int) -> np.ndarray:
    """Sum the weights ws into buckets indexed by ns mod q."""
    if len(ns) == 0:
        return np.zeros(q, dtype=np.float64)
    return np.bincount((ns % q).astype(np.intp), weights=ws, minlength=q)[:q]


def survivor_mask(shifts: np.ndarray, small_primes: np.ndarray) -> np.ndarray:
    """True where no small prime divides the shift value."""
    mask = np.ones(len(shifts), dtype=bool)
    for p in small_primes:
        mask &= (shifts % int(p)) != 0
    return mask


def unpaired_evens(flags: np.ndarray, lo: int, hi: int) -> np.ndarray:
    """Even N in [lo, hi] with no decomposition N = p + p', both odd primes.

    Processes the still-unpaired N against odd primes in ascending order;
    the survivor set collapses after a handful of iterations.
    """
    lo = max(lo, 6)
    if hi < lo:
        return np.empty(0, dtype=np.int64)
    start = lo if lo % 2 == 0 else lo + 1
    ns = np.arange(start, hi + 1, 2, dtype=np.int64)
    alive = np.ones(len(ns), dtype=bool)
    primes = np.flatnonzero(flags).astype(np.int64)
    for p in primes[primes > 2]:
        if not alive.any():
            break
        idx = np.flatnonzero(alive)
        cof = ns[idx] - int(p)
        valid = cof > 2
        hit = np.zeros(len(idx), dtype=bool)
        hit[valid] = flags[cof[valid]].astype(bool)
        alive[idx[hit]] = False
    return ns[alive]
