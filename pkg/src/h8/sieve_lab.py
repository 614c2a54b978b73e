"""The weighted linear sieve: exact sieve sums, boundary functions, bounds.

S(A, z) sums log p over the primes whose shifted companion (N - p for the
even-N problem, p + 2 for the twin problem) has no prime factor below z.
The Rosser-style boundary functions f and F give main-term lower/upper
bounds; the remainder sum over progressions is attached and the comparison
is reported, never assumed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from . import kernels
from .errors import DomainError, RangeError, ResourceError
from .primes import PrimeTable, euler_phi, singular_series, theta_ap
from .special_functions import EULER_GAMMA

_EXP_GAMMA = math.exp(EULER_GAMMA)


@dataclass(frozen=True)
class SieveTarget:
    """A sifted sequence: the even-N representation problem or the twin
    problem, with the progression residue its remainder terms use
    (N mod d for the former, the fixed residue 2 for the latter)."""

    kind: Literal["goldbach", "twin"]
    n: int

    def __post_init__(self):
        if self.kind == "goldbach":
            if self.n < 6 or self.n % 2 != 0:
                raise DomainError("even-N target needs even N >= 6")
        elif self.kind == "twin":
            if self.n < 6:
                raise DomainError("twin target needs N >= 6")
        else:
            raise DomainError(f"unknown target kind {self.kind!r}")

    @property
    def residue_l(self) -> int:
        return self.n if self.kind == "goldbach" else 2

    def shifts(self, ps: np.ndarray) -> np.ndarray:
        if self.kind == "goldbach":
            return self.n - ps
        return ps + 2


def goldbach_target(n: int) -> SieveTarget:
    return SieveTarget(kind="goldbach", n=n)


def twin_target(n: int) -> SieveTarget:
    return SieveTarget(kind="twin", n=n)


def rosser_f(u: float) -> float:
    """Lower boundary function 2 e^gamma log(u-1) / u on 2 <= u <= 4."""
    if not 2.0 - 1e-12 <= u <= 4.0 + 1e-12:
        raise DomainError(f"f(u) is used on [2, 4] only, got u = {u}")
    return 2.0 * _EXP_GAMMA * math.log(max(u, 2.0) - 1.0) / u


def rosser_F(u: float) -> float:
    """Upper boundary function 2 e^gamma / u on 2 <= u <= 3."""
    if not 2.0 - 1e-12 <= u <= 3.0 + 1e-12:
        raise DomainError(f"F(u) is used on [2, 3] only, got u = {u}")
    return 2.0 * _EXP_GAMMA / u


def rosser_fF(u: float) -> tuple[float, float]:
    """Both boundary functions; raises DomainError if either is undefined at
    u (use rosser_f / rosser_F individually on [3, 4])."""
    return rosser_f(u), rosser_F(u)


def _sifting_primes(z: float, table: PrimeTable, inclusive_z: bool) -> np.ndarray:
    if inclusive_z:
        return table.primes[table.primes <= z]
    return table.primes[table.primes < z]


def s_exact(
    target: SieveTarget,
    z: float,
    table: PrimeTable,
    inclusive_z: bool = False,
) -> float:
    """Exact sieve sum: log p over primes 2 < p <= N whose shift has no
    prime factor below z (trial division against the table; the primorial is
    never materialized). The boundary convention is strict (p' < z); set
    inclusive_z for the p' <= z variant."""
    if z < 2.0:
        raise DomainError("z must be at least 2")
    if target.n > table.limit:
        raise RangeError(f"N = {target.n} exceeds table limit {table.limit}")
    ps = table.primes[(table.primes > 2) & (table.primes <= target.n)]
    shifts = target.shifts(ps)
    keep = shifts > 0
    ps, shifts = ps[keep], shifts[keep]
    small = _sifting_primes(z, table, inclusive_z)
    mask = kernels.survivor_mask(np.ascontiguousarray(shifts), np.ascontiguousarray(small))
    return math.fsum(np.log(ps[mask].astype(np.float64)))


def surviving_primes(
    target: SieveTarget, z: float, table: PrimeTable, inclusive_z: bool = False
) -> np.ndarray:
    """The primes whose shifts survive the z-sieve (the support of s_exact)."""
    ps = table.primes[(table.primes > 2) & (table.primes <= target.n)]
    shifts = target.shifts(ps)
    keep = shifts > 0
    ps, shifts = ps[keep], shifts[keep]
    small = _sifting_primes(z, table, inclusive_z)
    mask = kernels.survivor_mask(np.ascontiguousarray(shifts), np.ascontiguousarray(small))
    return ps[mask]


def remainder_sum(
    target: SieveTarget, d_cap: int, table: PrimeTable
) -> tuple[float, list[tuple[int, int, float, float, float, bool]]]:
    """sum over 2 <= d <= d_cap of |theta(N; d, l) - N/phi(d)|.

    Moduli sharing a factor with l carry almost no primes; their rows use a
    zero main term and are flagged (coprime=False) instead of polluting the
    sum with a spurious N/phi(d).
    Returns (total, rows) with rows (d, l_eff, theta, main, |r|, coprime).
    """
    n, l = target.n, target.residue_l
    if n > table.limit:
        raise RangeError(f"N = {n} exceeds table limit {table.limit}")
    if d_cap > 10 ** 6:
        raise ResourceError("remainder d_cap beyond 1e6 exceeds the desk budget")
    rows = []
    for d in range(2, d_cap + 1):
        l_eff = l % d
        coprime = math.gcd(d, l) == 1
        theta = theta_ap(n, d, l_eff, 1, table)
        main = n / euler_phi(d, table) if coprime else 0.0
        rows.append((d, l_eff, theta, main, abs(theta - main), coprime))
    total = math.fsum(r[4] for r in rows)
    return total, rows


def middle_buchstab_sum(target: SieveTarget, table: PrimeTable) -> float:
    """The middle term of the three-term chain: for each prime p in
    [N^(1/3), N^(1/2)], the sieve sum restricted to shifts divisible by p,
    at sifting level z = N^(1/3). Shift values run over multiples of p; the
    companion prime is recovered as shift^{-1} under the target map."""
    n = target.n
    if n > table.limit:
        raise RangeError(f"N = {n} exceeds table limit {table.limit}")
    z = n ** (1.0 / 3.0)
    lo, hi = z, math.sqrt(n)
    mids = table.primes[(table.primes >= lo) & (table.primes <= hi)]
    small = _sifting_primes(z, table, False)
    total = 0.0
    for pm in mids:
        pm = int(pm)
        if target.kind == "goldbach":
            # a = N - p1 multiple of pm, p1 = N - a prime > 2
            a = np.arange(pm, n - 2, pm, dtype=np.int64)
            p1 = n - a
        else:
            # a = p1 + 2 multiple of pm, p1 = a - 2 prime in (2, N]
            a = np.arange(pm, n + 3, pm, dtype=np.int64)
            p1 = a - 2
        ok = (p1 > 2) & (p1 <= table.limit)
        a, p1 = a[ok], p1[ok]
        isp = table.flags[p1].astype(bool)
        a, p1 = a[isp], p1[isp]
        mask = kernels.survivor_mask(np.ascontiguousarray(a), np.ascontiguousarray(small))
        total += float(np.sum(np.log(p1[mask].astype(np.float64))))
    return total


@dataclass(frozen=True)
class SieveBoundReport:
    """Main-term bounds against the exact sieve sum for one (N, y, z).

    lower/upper are the boundary-function main terms with the 1 + O(1/log z)
    factor set to one (main_term_only marks that); remainder_sum is the
    progression remainder truncated at d_cap. within_bounds records whether
    lower - remainder <= s_exact <= upper + remainder held; it is data, not
    an assertion.
    """

    n: int
    z: float
    y: float
    u: float
    s_exact: float
    lower_bound: float
    upper_bound: float
    remainder_sum: float
    f_u: float
    F_u: float
    within_bounds: bool
    d_cap: int
    singular: float
    main_term_only: bool = True
    strict_z: bool = True


def bound_report(
    target: SieveTarget,
    y: float,
    z: float,
    d_cap: int,
    table: PrimeTable,
    inclusive_z: bool = False,
) -> SieveBoundReport:
    """Full bound-vs-exact comparison for one target at level (y, z)."""
    if not 2.0 <= z <= math.sqrt(y) + 1e-9:
        raise DomainError("need 2 <= z <= sqrt(y)")
    u = math.log(y) / math.log(z)
    f_u = rosser_f(u)
    F_u = rosser_F(u)
    n = target.n
    cutoff = min(table.limit, 10 ** 6)
    c_n, _ = singular_series(n, cutoff, table)
    main = 2.0 * math.exp(-EULER_GAMMA) * c_n * n / math.log(z)
    lower = main * f_u
    upper = main * F_u
    s_val = s_exact(target, z, table, inclusive_z)
    rem, _ = remainder_sum(target, d_cap, table)
    within = (lower - rem <= s_val <= upper + rem)
    return SieveBoundReport(
        n=n, z=float(z), y=float(y), u=u,
        s_exact=s_val, lower_bound=lower, upper_bound=upper,
        remainder_sum=rem, f_u=f_u, F_u=F_u,
        within_bounds=within, d_cap=d_cap, singular=c_n,
        strict_z=not inclusive_z,
    )


def reconcile_with_weighted(n: int, table: PrimeTable) -> tuple[float, float, float]:
    """Exact reconciliation of the sieve sum at z just above sqrt(N) with
    the weighted representation sum.

    Above sqrt(N) every surviving shift is either 1 or a single prime
    exceeding z, so the sieve support equals {p : N - p = 1} union
    {p : N - p prime > sqrt(N)}. Both sides are summed over the identical
    prime set in ascending order; the difference is exactly zero whenever
    the support identity holds.
    Returns (s_exact_value, reconstruction, difference).
    """
    target = goldbach_target(n)
    z = math.sqrt(n) + 1e-9
    s_val = s_exact(target, z, table)
    ps = table.primes[(table.primes > 2) & (table.primes <= n)]
    cof = n - ps
    keep = cof > 0
    ps, cof = ps[keep], cof[keep]
    is_unit = cof == 1
    big_prime = (cof > z) & (table.flags[np.clip(cof, 0, table.limit)].astype(bool))
    support = ps[is_unit | big_prime]
    reconstruction = math.fsum(np.log(support.astype(np.float64)))
    return s_val, reconstruction, s_val - reconstruction
