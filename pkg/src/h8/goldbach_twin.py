"""Exact even-N representation and twin counts against the sieve bound.

Every record carries the weighted sum, the pair count, the main-term bound
4(2 log 2 - log 3) C(N) N / log N, and the pieces of the three-term chain
(s_lower and the middle subtraction term) so the chain's empirical status
is a data column. Ratios are reported, never asserted: the bound's error
term has an unknown constant, so a sub-unit ratio at moderate N decides
nothing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from . import kernels
from .errors import DomainError, RangeError, ResourceError
from .parallel import parallel_map
from .primes import PrimeTable, singular_series
from .sieve_lab import goldbach_target, middle_buchstab_sum, s_exact

BOUND_CONSTANT = 4.0 * (2.0 * math.log(2.0) - math.log(3.0))  # about 1.1507283


@dataclass(frozen=True)
class GoldbachRecord:
    """One even N: representation weights, counts, and bound comparison."""

    n: int
    weighted_sum: float
    pair_count_ordered: int
    pair_count_unordered: int
    c_n: float
    bound_value: float
    ratio: float
    s_lower: float
    middle_term: float


@dataclass(frozen=True)
class TwinRecord:
    """Twins up to N, counted at the larger member p = p1 + 2."""

    n: int
    weighted_sum: float
    pair_count: int
    c_n: float
    bound_value: float
    ratio: float
    hl_ratio: float


@dataclass(frozen=True)
class ScanOutcome:
    """Summary of a range scan: the worst bound ratio over records with
    N >= 10^4 (small N drowns in the unknown error term) and the list of
    scanned values with no representation at all (expected empty)."""

    min_ratio: float | None
    violations: list[int]
    n_records: int


def _bound_value(n: int, table: PrimeTable) -> tuple[float, float]:
    cutoff = min(table.limit, 10 ** 6)
    c_n, _ = singular_series(n, cutoff, table)
    return c_n, BOUND_CONSTANT * c_n * n / math.log(n)


def _goldbach_pairs(n: int, table: PrimeTable) -> tuple[np.ndarray, np.ndarray]:
    ps = table.primes[(table.primes > 2) & (table.primes < n)]
    cof = n - ps
    mask = (cof > 2) & table.flags[cof].astype(bool)
    return ps[mask], cof[mask]


def evaluate_even(n: int, table: PrimeTable) -> GoldbachRecord:
    """Exact record for one even N >= 6: ordered representation scan plus
    the sieve-side chain terms at z = N^(1/3)."""
    if n % 2 != 0 or n < 6:
        raise DomainError(f"need even N >= 6, got {n}")
    if n > table.limit:
        raise RangeError(f"N = {n} exceeds table limit {table.limit}")
    ps, _ = _goldbach_pairs(n, table)
    weighted = math.fsum(np.log(ps.astype(np.float64)))
    ordered = len(ps)
    half_prime = n % 2 == 0 and (n // 2) <= table.limit and bool(table.flags[n // 2])
    unordered = (ordered + (1 if half_prime else 0)) // 2
    c_n, bound = _bound_value(n, table)
    target = goldbach_target(n)
    # below N = 8 the cube root dips under 2, where the sieve is vacuous
    s_lower = s_exact(target, max(2.0, n ** (1.0 / 3.0)), table)
    middle = middle_buchstab_sum(target, table)
    return GoldbachRecord(
        n=n,
        weighted_sum=weighted,
        pair_count_ordered=ordered,
        pair_count_unordered=unordered,
        c_n=c_n,
        bound_value=bound,
        ratio=weighted / bound,
        s_lower=s_lower,
        middle_term=middle,
    )


_TWIN_CACHE: "weakref.WeakKeyDictionary[PrimeTable, tuple[np.ndarray, np.ndarray]]" = None  # type: ignore[assignment]


def _twin_arrays(table: PrimeTable) -> tuple[np.ndarray, np.ndarray]:
    """Larger twin members in the table plus the cumulative sum of their logs."""
    global _TWIN_CACHE
    if _TWIN_CACHE is None:
        import weakref

        _TWIN_CACHE = weakref.WeakKeyDictionary()
    if table not in _TWIN_CACHE:
        ps = table.primes[table.primes > 2]
        members = ps[table.flags[ps - 2].astype(bool)]
        cumsum = np.concatenate([[0.0], np.cumsum(np.log(members.astype(np.float64)))])
        _TWIN_CACHE[table] = (members, cumsum)
    return _TWIN_CACHE[table]


def twin_count_bitmap_oracle(n: int, table: PrimeTable) -> int:
    """Independent twin count: AND of the primality bitmap with its
    two-shift, kept separate from the prime-list scan path on purpose."""
    if n > table.limit:
        raise RangeError(f"N = {n} exceeds table limit {table.limit}")
    window = table.flags[: n + 1]
    return int(np.count_nonzero(window[:-2] & window[2:]))


def evaluate_twin(n: int, table: PrimeTable) -> TwinRecord:
    """Twin record at N: sum of log p over larger members p <= N.

    The singular-series factor uses the N-dependent product form even
    though the classical twin constant has no such factor; c_n makes that
    choice visible in every row. hl_ratio compares the count against the
    doubled product times the squared-log integral (adaptive quadrature).
    """
    if n < 6:
        raise DomainError(f"need N >= 6, got {n}")
    if n > table.limit:
        raise RangeError(f"N = {n} exceeds table limit {table.limit}")
    members, cumsum = _twin_arrays(table)
    count = int(np.searchsorted(members, n, side="right"))
    weighted = float(cumsum[count])
    c_n, bound = _bound_value(n, table)
    cutoff = min(table.limit, 10 ** 6)
    twin_const, _ = singular_series(2, cutoff, table)  # no odd prime divisor
    integral, _ = quad(lambda t: 1.0 / math.log(t) ** 2, 2.0, float(n), limit=200)
    hl = count / (2.0 * twin_const * integral)
    return TwinRecord(
        n=n,
        weighted_sum=weighted,
        pair_count=count,
        c_n=c_n,
        bound_value=bound,
        ratio=weighted / bound,
        hl_ratio=hl,
    )


def scan_range(
    n_start: int,
    n_end: int,
    step: int,
    target_kind: str,
    table: PrimeTable,
    workers: int = 1,
) -> tuple[list, ScanOutcome]:
    """Records at N = n_start, n_start+step, ... plus the range summary.

    For the even-N scan the violation check always covers every even N in
    [n_start, n_end] through the pairing kernel, independent of the record
    step; detailed records follow the step so wide ranges stay affordable.
    """
    if target_kind not in ("goldbach", "twin"):
        raise DomainError(f"unknown target kind {target_kind!r}")
    if n_end > table.limit:
        raise RangeError(f"range end {n_end} exceeds table limit {table.limit}")
    if n_end < n_start:
        raise DomainError("empty range")
    if step < 1:
        raise DomainError("step must be positive")
    if target_kind == "goldbach":
        if n_start % 2 != 0 or step % 2 != 0:
            raise DomainError("even-N scan needs even start and even step")
        if n_start < 6:
            raise DomainError("even-N scan starts at 6")
    ns = list(range(n_start, n_end + 1, step))
    if len(ns) > 200_000:
        raise ResourceError("record count beyond 200000; widen the step")

    if target_kind == "goldbach":
        records = parallel_map(lambda n: evaluate_even(n, table), ns, workers)
        violations = [int(v) for v in kernels.unpaired_evens(table.flags, n_start, n_end)]
    else:
        records = parallel_map(lambda n: evaluate_twin(n, table), ns, workers)
        violations = [r.n for r in records if r.pair_count == 0]

    ratios = [r.ratio for r in records if r.n >= 10 ** 4]
    summary = ScanOutcome(
        min_ratio=min(ratios) if ratios else None,
        violations=violations,
        n_records=len(records),
    )
    return records, summary
