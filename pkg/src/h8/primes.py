"""Segmented sieving and the arithmetic counting functions built on it.

One immutable PrimeTable feeds every prime-power sum: the Chebyshev
functions, their arithmetic-progression restrictions (with the optional
b-scaling), character-twisted sums, error-term scans over moduli, and the
arithmetic constants (Euler phi, the singular-series product, the
interval Mertens sum).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from . import kernels
from .config import DEFAULT_CONFIG, EvalConfig
from .errors import DomainError, RangeError, ResourceError
from .special_functions import THETA_PSI_EQUIV, IdentityReport

_DEFAULT_SEGMENT = 1 << 20
_DEFAULT_MEMORY_BUDGET = 2 << 30  # bytes for the primality bitmap
_WORK_BUDGET = 2_000_000_000  # bucket-sum operations per scan


@dataclass(eq=False)
class PrimeTable:
    """Primality data up to `limit`, immutable after build.

    flags is a byte bitmap over [0, limit]; primes the ascending prime list.
    Prime-power arrays (for the von Mangoldt weights) and cumulative log
    sums are materialized lazily and cached. Identity semantics (eq=False)
    let derived data be cached per table.
    """

    limit: int
    flags: np.ndarray
    primes: np.ndarray
    segment_size: int
    _pp_values: np.ndarray | None = field(default=None, repr=False)
    _pp_logs: np.ndarray | None = field(default=None, repr=False)
    _pp_logs_cumsum: np.ndarray | None = field(default=None, repr=False)
    _prime_logs_cumsum: np.ndarray | None = field(default=None, repr=False)

    def is_prime(self, n: int) -> bool:
        if not 0 <= n <= self.limit:
            raise RangeError(f"{n} outside table limit {self.limit}")
        return bool(self.flags[n])

    def _prime_power_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        if self._pp_values is None:
            base = self.primes.astype(np.int64)
            base_logs = np.log(base.astype(np.float64))
            values = [base]
            logs = [base_logs]
            cur, cur_base, cur_logs = base, base, base_logs
            while True:
                # mask before multiplying so the int64 product stays in range
                mask = cur <= self.limit // cur_base
                if not np.any(mask):
                    break
                cur = cur[mask] * cur_base[mask]
                cur_base = cur_base[mask]
                cur_logs = cur_logs[mask]
                values.append(cur)
                logs.append(cur_logs)
            pp = np.concatenate(values)
            lg = np.concatenate(logs)
            order = np.argsort(pp, kind="stable")
            self._pp_values = np.ascontiguousarray(pp[order])
            self._pp_logs = np.ascontiguousarray(lg[order])
        return self._pp_values, self._pp_logs

    def _pp_cumsum(self) -> np.ndarray:
        if self._pp_logs_cumsum is None:
            _, lg = self._prime_power_arrays()
            self._pp_logs_cumsum = np.concatenate([[0.0], np.cumsum(lg)])
        return self._pp_logs_cumsum

    def _prime_cumsum(self) -> np.ndarray:
        if self._prime_logs_cumsum is None:
            lg = np.log(self.primes.astype(np.float64))
            self._prime_logs_cumsum = np.concatenate([[0.0], np.cumsum(lg)])
        return self._prime_logs_cumsum


def build_prime_table(
    limit: int,
    segment_size: int = _DEFAULT_SEGMENT,
    memory_budget: int = _DEFAULT_MEMORY_BUDGET,
) -> PrimeTable:
    """Segmented sieve of Eratosthenes up to `limit` (inclusive)."""
    if limit < 2:
        raise DomainError(f"limit must be at least 2, got {limit}")
    if limit > 10 ** 9:
        raise DomainError("limits beyond 1e9 are out of scope")
    if limit + 1 > memory_budget:
        raise ResourceError(
            f"bitmap for limit {limit} exceeds the {memory_budget}-byte budget"
        )
    flags = kernels.sieve_flags(limit, segment_size)
    primes = np.flatnonzero(flags).astype(np.int64)
    return PrimeTable(limit=limit, flags=flags, primes=primes, segment_size=segment_size)


def chebyshev_snapshot(x: int, table: PrimeTable) -> tuple[float, float, int]:
    """(psi(x), theta(x), pi(x)): the von Mangoldt sum over prime powers,
    the log sum over primes, and the prime count, all exact."""
    if x > table.limit:
        raise RangeError(f"x = {x} exceeds table limit {table.limit}")
    if x < 0:
        raise DomainError("x must be nonnegative")
    pp, _ = table._prime_power_arrays()
    cs = table._pp_cumsum()
    psi = float(cs[np.searchsorted(pp, x, side="right")])
    pcs = table._prime_cumsum()
    k = int(np.searchsorted(table.primes, x, side="right"))
    theta = float(pcs[k])
    return psi, theta, k


@dataclass(frozen=True)
class APErrorRecord:
    """Exact progression sums at one (x, q, l, b) with their error terms.

    psi_val sums von Mangoldt weights over b*n <= x, b*n = l (mod q);
    theta_val the same with n restricted to primes > 2. main_term is
    (x/b)/phi(q); e_psi and e_theta are the signed deviations.
    """

    x: int
    q: int
    l: int
    b: int
    psi_val: float
    theta_val: float
    main_term: float
    e_psi: float
    e_theta: float


def euler_phi(n: int, table: PrimeTable) -> int:
    """Euler phi by factorization against the table's primes."""
    if n < 1:
        raise DomainError("phi(n) needs n >= 1")
    if n > table.limit * table.limit:
        raise RangeError("n exceeds the factorization reach of this table")
    result = n
    m = n
    for p in table.primes:
        p = int(p)
        if p * p > m:
            break
        if m % p == 0:
            result -= result // p
            while m % p == 0:
                m //= p
    if m > 1:
        result -= result // m
    return result


def _psi_residue_sums(x: int, q: int, b: int, table: PrimeTable) -> np.ndarray:
    pp, lg = table._prime_power_arrays()
    hi = int(np.searchsorted(pp, x // b, side="right"))
    return kernels.residue_logsums(pp[:hi], lg[:hi], q)


def _theta_residue_sums(x: int, q: int, b: int, table: PrimeTable) -> np.ndarray:
    tp = table.primes[1:]  # progressions exclude p = 2
    hi = int(np.searchsorted(tp, x // b, side="right"))
    logs = np.log(tp[:hi].astype(np.float64))
    return kernels.residue_logsums(np.ascontiguousarray(tp[:hi]), logs, q)


def psi_ap(x: int, q: int, l: int, b: int, table: PrimeTable) -> float:
    """psi(x; b, q, l) with no coprimality requirement on (l, q)."""
    if x > table.limit:
        raise RangeError(f"x = {x} exceeds table limit {table.limit}")
    g = math.gcd(b, q)
    if g > 1:
        if l % g != 0:
            return 0.0
        # solutions n = l * (b/g)^{-1} mod (q/g); fold to the reduced modulus
        qq, bb, ll = q // g, b // g, l // g
        sums = _psi_residue_sums(x, qq, b, table)
        return float(sums[(ll * pow(bb, -1, qq)) % qq]) if qq > 1 else float(np.sum(sums))
    sums = _psi_residue_sums(x, q, b, table)
    return float(sums[(l * pow(b, -1, q)) % q])


def theta_ap(x: int, q: int, l: int, b: int, table: PrimeTable) -> float:
    """theta(x; b, q, l) over primes p > 2 with b*p <= x, no coprimality required."""
    if x > table.limit:
        raise RangeError(f"x = {x} exceeds table limit {table.limit}")
    g = math.gcd(b, q)
    if g > 1:
        if l % g != 0:
            return 0.0
        qq, bb, ll = q // g, b // g, l // g
        sums = _theta_residue_sums(x, qq, b, table)
        return float(sums[(ll * pow(bb, -1, qq)) % qq]) if qq > 1 else float(np.sum(sums))
    sums = _theta_residue_sums(x, q, b, table)
    return float(sums[(l * pow(b, -1, q)) % q])


def ap_error(x: int, q: int, l: int, b: int, table: PrimeTable) -> APErrorRecord:
    """Error record for one progression; requires gcd(l, q) = 1."""
    if q < 2:
        raise DomainError("modulus q must be at least 2")
    if math.gcd(l, q) != 1:
        raise DomainError(f"gcd(l, q) must be 1, got gcd({l}, {q}) > 1")
    if b < 1 or 2 * b > x:
        raise DomainError("need b >= 1 and 2b <= x")
    if x > table.limit:
        raise RangeError(f"x = {x} exceeds table limit {table.limit}")
    psi_val = psi_ap(x, q, l, b, table)
    theta_val = theta_ap(x, q, l, b, table)
    main = (x / b) / euler_phi(q, table)
    return APErrorRecord(
        x=x, q=q, l=l, b=b,
        psi_val=psi_val, theta_val=theta_val, main_term=main,
        e_psi=psi_val - main, e_theta=theta_val - main,
    )


def psi_chi(x: int, chi, table: PrimeTable) -> complex:
    """Character-twisted von Mangoldt sum over n <= x, via the residue
    bucket sums and the character's value table."""
    if x > table.limit:
        raise RangeError(f"x = {x} exceeds table limit {table.limit}")
    q = chi.modulus
    if q == 1:
        psi, _, _ = chebyshev_snapshot(x, table)
        return complex(psi)
    sums = _psi_residue_sums(x, q, 1, table)
    return complex(np.sum(chi.values * sums))


@dataclass(frozen=True)
class ScanSummary:
    """Aggregate of one error-term scan over moduli (and optionally scales b).

    total is the sum of |e_psi| over all emitted rows under the chosen
    residue policy; comparison is the reference column x / log^A x. Nothing
    is asserted about their relation: the table itself is the deliverable.
    """

    x: int
    d_cap: int
    policy: str
    total: float
    comparison: float
    a_exponent: float
    b_exponent: float


def error_scan(
    x: int,
    d_cap: int,
    policy: str = "max_over_l",
    a_exponent: float = 2.0,
    b_exponent: float = 4.0,
    b_range: list[int] | None = None,
    table: PrimeTable | None = None,
) -> tuple[ScanSummary, list[APErrorRecord]]:
    """Per-modulus error rows for q in [2, d_cap], policy-selected residue.

    fixed_l uses l = 1 for every q; max_over_l picks the unit residue
    maximizing |e_psi| (smallest such l on ties). With b_range, rows cover
    the doubly indexed (q, b) grid using the scaled sums.
    """
    if table is None:
        raise DomainError("a PrimeTable is required")
    if policy not in ("fixed_l", "max_over_l"):
        raise DomainError(f"unknown policy {policy!r}")
    if d_cap < 2:
        raise DomainError("d_cap must be at least 2")
    if d_cap > x:
        raise DomainError("d_cap cannot exceed x")
    if x > table.limit:
        raise RangeError(f"x = {x} exceeds table limit {table.limit}")
    bs = [1] if b_range is None else [int(b) for b in b_range]
    if any(b < 1 or 2 * b > x for b in bs):
        raise DomainError("every b needs 1 <= b and 2b <= x")
    pp, _ = table._prime_power_arrays()
    n_pp = int(np.searchsorted(pp, x, side="right"))
    if n_pp * (d_cap - 1) * len(bs) > _WORK_BUDGET:
        raise ResourceError("scan work estimate exceeds the configured budget")

    rows: list[APErrorRecord] = []
    for b in bs:
        for q in range(2, d_cap + 1):
            if math.gcd(b, q) > 1:
                # scaled progression never meets a unit residue class
                main = (x / b) / euler_phi(q, table)
                rows.append(APErrorRecord(x=x, q=q, l=1, b=b, psi_val=0.0, theta_val=0.0,
                                          main_term=main, e_psi=-main, e_theta=-main))
                continue
            psi_sums = _psi_residue_sums(x, q, b, table)
            theta_sums = _theta_residue_sums(x, q, b, table)
            main = (x / b) / euler_phi(q, table)
            b_inv = pow(b, -1, q)
            if policy == "fixed_l":
                chosen = 1
            else:
                chosen, best = 1, -1.0
                for l in range(1, q + 1):
                    if math.gcd(l, q) != 1:
                        continue
                    dev = abs(float(psi_sums[(l * b_inv) % q]) - main)
                    if dev > best + 1e-15:
                        chosen, best = l, dev
            pv = float(psi_sums[(chosen * b_inv) % q])
            tv = float(theta_sums[(chosen * b_inv) % q])
            rows.append(APErrorRecord(x=x, q=q, l=chosen, b=b, psi_val=pv, theta_val=tv,
                                      main_term=main, e_psi=pv - main, e_theta=tv - main))
    total = math.fsum(abs(r.e_psi) for r in rows)
    summary = ScanSummary(
        x=x, d_cap=d_cap, policy=policy, total=total,
        comparison=x / math.log(x) ** a_exponent,
        a_exponent=a_exponent, b_exponent=b_exponent,
    )
    return summary, rows


def theta_psi_probe(
    points: list[tuple[int, int, int]],
    table: PrimeTable,
    cfg: EvalConfig = DEFAULT_CONFIG,
    tolerance: float | None = None,
) -> IdentityReport:
    """Probe of the stated claim that the theta- and psi-progression errors
    agree in absolute value. They differ by the prime-power contribution;
    the residual column records that failure size honestly, and the
    assertable triangle bound lives in the record invariants instead."""
    tol = cfg.tolerance_default if tolerance is None else tolerance
    residuals = []
    for (x, q, l) in points:
        rec = ap_error(x, q, l, 1, table)
        residuals.append(abs(abs(rec.e_theta) - abs(rec.e_psi)))
    return IdentityReport.from_residuals(THETA_PSI_EQUIV, list(points), residuals, tol)


class ArithmeticConstants(NamedTuple):
    phi: int
    c_of_n: float
    mertens_sum: float
    c_tail_bound: float


_SINGULAR_CACHE: "weakref.WeakKeyDictionary[PrimeTable, dict[int, float]]" = None  # type: ignore[assignment]


def _singular_log_product(cutoff: int, table: PrimeTable) -> float:
    global _SINGULAR_CACHE
    if _SINGULAR_CACHE is None:
        import weakref

        _SINGULAR_CACHE = weakref.WeakKeyDictionary()
    per_table = _SINGULAR_CACHE.setdefault(table, {})
    if cutoff not in per_table:
        odd = table.primes[(table.primes > 2) & (table.primes <= cutoff)].astype(np.float64)
        per_table[cutoff] = float(np.sum(np.log1p(-1.0 / (odd - 1.0) ** 2)))
    return per_table[cutoff]


def singular_series(N: int, cutoff: int, table: PrimeTable) -> tuple[float, float]:
    """The singular-series product for N: the finite factor over odd primes
    dividing N times the infinite product over all odd primes truncated at
    `cutoff`. Returns (value, relative tail bound); the truncated tail is
    bounded by sum_{n > cutoff} 1/(n-1)^2 < 1/(cutoff-1)."""
    if cutoff > table.limit:
        raise RangeError(f"cutoff {cutoff} exceeds table limit {table.limit}")
    if cutoff < 3:
        raise DomainError("cutoff must be at least 3")
    value = math.exp(_singular_log_product(cutoff, table))
    m = N
    while m % 2 == 0:
        m //= 2
    for p in _odd_prime_divisors(m, table):
        value *= (p - 1.0) / (p - 2.0)
    return value, 1.0 / (cutoff - 1.0)


def _odd_prime_divisors(m: int, table: PrimeTable) -> list[int]:
    out = []
    for p in table.primes[1:]:
        p = int(p)
        if p * p > m:
            break
        if m % p == 0:
            out.append(p)
            while m % p == 0:
                m //= p
    if m > 1:
        out.append(m)
    return out


def arithmetic_constants(
    n_or_N: int, cutoff: int, table: PrimeTable
) -> ArithmeticConstants:
    """(phi(n), C(N), interval Mertens sum, singular-series tail bound).

    C(N) is the singular-series product (even N only); the Mertens sum is
    sum 1/p over primes in [N^(1/3), N^(1/2)], exact from the table.
    """
    n = int(n_or_N)
    if n < 1:
        raise DomainError("argument must be positive")
    if n % 2 != 0:
        raise DomainError("the singular-series product is defined for even N here")
    phi = euler_phi(n, table)
    c_value, tail = singular_series(n, cutoff, table)
    mertens = mertens_interval_sum(n, table)
    return ArithmeticConstants(phi=phi, c_of_n=c_value, mertens_sum=mertens, c_tail_bound=tail)


def mertens_interval_sum(N: int, table: PrimeTable) -> float:
    """sum of 1/p over primes p with N^(1/3) <= p <= N^(1/2)."""
    lo = N ** (1.0 / 3.0)
    hi = math.isqrt(N)
    if hi > table.limit:
        raise RangeError("table too small for the interval Mertens sum")
    sel = table.primes[(table.primes >= lo) & (table.primes <= hi)].astype(np.float64)
    return float(np.sum(1.0 / sel)) if len(sel) else 0.0
