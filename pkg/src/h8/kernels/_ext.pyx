# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled implementations of the hot kernels (see _py.py for the contract)."""

import numpy as np

cimport numpy as cnp

cnp.import_array()


def sieve_flags(long long limit, long long segment_size=1 << 20):
    cdef cnp.ndarray[cnp.uint8_t, ndim=1] flags = np.zeros(limit + 1, dtype=np.uint8)
    cdef cnp.uint8_t[::1] f = flags
    cdef long long root, p, m, lo, hi, start, i
    if limit < 2:
        return flags
    root = <long long>(limit ** 0.5)
    while (root + 1) * (root + 1) <= limit:
        root += 1
    for i in range(2, root + 1):
        f[i] = 1
    p = 2
    while p * p <= root:
        if f[p]:
            m = p * p
            while m <= root:
                f[m] = 0
                m += p
        p += 1
    lo = root + 1
    while lo <= limit:
        hi = lo + segment_size
        if hi > limit + 1:
            hi = limit + 1
        for i in range(lo, hi):
            f[i] = 1
        p = 2
        while p <= root:
            if f[p]:
                start = p * p
                if start < lo:
                    start = ((lo + p - 1) // p) * p
                m = start
                while m < hi:
                    f[m] = 0
                    m += p
            p += 1
        lo = hi
    return flags


def residue_logsums(cnp.ndarray[cnp.int64_t, ndim=1] ns,
                    cnp.ndarray[cnp.float64_t, ndim=1] ws,
                    long long q):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.zeros(q, dtype=np.float64)
    cdef cnp.float64_t[::1] o = out
    cdef cnp.int64_t[::1] n = ns
    cdef cnp.float64_t[::1] w = ws
    cdef Py_ssize_t i, m = ns.shape[0]
    for i in range(m):
        o[n[i] % q] += w[i]
    return out


def survivor_mask(cnp.ndarray[cnp.int64_t, ndim=1] shifts,
                  cnp.ndarray[cnp.int64_t, ndim=1] small_primes):
    cdef cnp.ndarray[cnp.uint8_t, ndim=1] out = np.ones(shifts.shape[0], dtype=np.uint8)
    cdef cnp.uint8_t[::1] o = out
    cdef cnp.int64_t[::1] s = shifts
    cdef cnp.int64_t[::1] sp = small_primes
    cdef Py_ssize_t i, j, n = shifts.shape[0], k = small_primes.shape[0]
    for i in range(n):
        for j in range(k):
            if s[i] % sp[j] == 0:
                o[i] = 0
                break
    return out.view(bool)


def unpaired_evens(cnp.ndarray[cnp.uint8_t, ndim=1] flags, long long lo, long long hi):
    cdef long long start, n, p, cof
    cdef cnp.uint8_t[::1] f = flags
    cdef long long limit = flags.shape[0] - 1
    if lo < 6:
        lo = 6
    if hi > limit:
        hi = limit
    if hi < lo:
        return np.empty(0, dtype=np.int64)
    start = lo if lo % 2 == 0 else lo + 1
    out = []
    n = start
    while n <= hi:
        p = 3
        cof = 0
        while p <= n - 3:
            if f[p] and f[n - p]:
                cof = 1
                break
            p += 2
        if cof == 0:
            out.append(n)
        n += 2
    return np.asarray(out, dtype=np.int64)
