"""Critical-line zero location, count certification, and truncation checks.

Zeros of zeta are found as sign changes of the rotated critical-line
function Z(t) and certified complete by comparing the on-line count against
the strip-wide count estimate: a genuine off-line zero would show up as a
deficit. L-function ordinates are not searched internally; they are
ingested from CSV files.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .config import DEFAULT_CONFIG, EvalConfig
from .errors import DomainError, GridTooCoarse, InsufficientZeros, ParseError, RangeError
from .parallel import parallel_map
from .special_functions import _em_length, _hurwitz_em_batch, log_gamma

_GRID_STEP = 0.05  # minimal known zero gap below T=500 exceeds ten times this
_BISECT_TOL = 1e-9
_MAX_HEIGHT = 500.0


@dataclass(frozen=True)
class ZeroSet:
    """An ordered list of zero ordinates up to a height bound.

    source is "zeta_internal" for ordinates produced by find_zeta_zeros and
    "external_file" for ingested lists; only internal sets can be count-
    certified.
    """

    source: str
    label: str
    ordinates: np.ndarray
    height_bound: float
    count_certified: bool = False

    def __post_init__(self):
        ords = np.asarray(self.ordinates, dtype=np.float64)
        object.__setattr__(self, "ordinates", ords)
        if len(ords) > 0:
            if np.any(ords <= 0.0) or np.any(ords > self.height_bound):
                raise RangeError("ordinates must lie in (0, height_bound]")
            if np.any(np.diff(ords) <= 0.0):
                raise ParseError("ordinates must be strictly increasing")

    def __len__(self) -> int:
        return len(self.ordinates)


def rs_theta_and_Z(t: float, cfg: EvalConfig = DEFAULT_CONFIG) -> tuple[float, float]:
    """Rotation phase theta(t) and the rotated critical-line value Z(t).

    theta(t) = Im log Gamma(1/4 + it/2) - (t/2) log pi on the continuous
    branch; Z(t) = exp(i theta) zeta(1/2 + it) is real with |Z| = |zeta| and
    changes sign exactly at on-line zeros.
    """
    if t < 0.0:
        raise DomainError("t must be nonnegative")
    theta = _theta(t)
    s = complex(0.5, t)
    m = _em_length(s, cfg)
    z = complex(_hurwitz_em_batch(s, np.array([1.0]), m, cfg.em_correction_terms)[0])
    zval = (np.exp(1j * theta) * z).real
    return theta, float(zval)


def _theta(t: float) -> float:
    return log_gamma(complex(0.25, t / 2.0)).imag - (t / 2.0) * math.log(math.pi)


def _z_batch(ts: np.ndarray, m: int, k: int) -> np.ndarray:
    """Z(t) for a batch of heights with one shared direct-sum length, so a
    value is reproducible no matter which batch it appears in."""
    out = np.empty(len(ts), dtype=np.float64)
    for i, t in enumerate(ts):
        t = float(t)
        z = complex(_hurwitz_em_batch(complex(0.5, t), np.array([1.0]), m, k)[0])
        out[i] = (np.exp(1j * _theta(t)) * z).real
    return out


def find_zeta_zeros(
    T: float,
    cfg: EvalConfig = DEFAULT_CONFIG,
    workers: int = 1,
) -> ZeroSet:
    """All zeta zero ordinates in (0, T], by grid scan plus bisection.

    The grid step is 0.05; every sign change is bisected to 1e-9. The
    returned set carries count_certified from zero_count_check. Work is
    partitioned over disjoint grid cells, so worker count never changes the
    result.
    """
    if not 0.0 < T <= _MAX_HEIGHT:
        raise DomainError(f"T must lie in (0, {_MAX_HEIGHT}], got {T}")
    n_cells = int(math.ceil(T / _GRID_STEP))
    grid = np.minimum(np.arange(n_cells + 1) * _GRID_STEP, T)
    # one shared sum length for the whole run keeps grid and bisection
    # evaluations bitwise consistent
    m = max(cfg.euler_maclaurin_cutoff, int(10.0 * T) + 1)
    k = cfg.em_correction_terms

    chunks = np.array_split(np.arange(len(grid)), max(1, min(workers * 4, len(grid))))
    zvals = np.concatenate(parallel_map(lambda idx: _z_batch(grid[idx], m, k), chunks, workers))

    brackets = [
        (grid[i], grid[i + 1], zvals[i], zvals[i + 1])
        for i in range(n_cells)
        if zvals[i] == 0.0 or (zvals[i] < 0.0) != (zvals[i + 1] < 0.0)
    ]

    def refine(bracket) -> float:
        lo, hi, flo, fhi = bracket
        if flo == 0.0:
            return float(lo)
        if (flo < 0.0) == (fhi < 0.0):
            raise GridTooCoarse(f"sign data inconsistent on [{lo}, {hi}]")
        while hi - lo > _BISECT_TOL:
            mid = 0.5 * (lo + hi)
            fmid = float(_z_batch(np.array([mid]), m, k)[0])
            if fmid == 0.0:
                return float(mid)
            if (fmid < 0.0) == (flo < 0.0):
                lo, flo = mid, fmid
            else:
                hi = mid
        return 0.5 * (lo + hi)

    ordinates = np.array(sorted(parallel_map(refine, brackets, workers)), dtype=np.float64)
    ordinates = ordinates[(ordinates > 0.0) & (ordinates <= T)]
    if len(ordinates) > 1 and np.any(np.diff(ordinates) <= 1e-6):
        raise GridTooCoarse("two refined zeros collide within one grid cell")

    zs = ZeroSet(source="zeta_internal", label="zeta", ordinates=ordinates, height_bound=float(T))
    _, _, certified = zero_count_check(zs, cfg)
    return replace(zs, count_certified=certified)


def zero_count_check(
    zeroset: ZeroSet, cfg: EvalConfig = DEFAULT_CONFIG
) -> tuple[float, int, bool]:
    """Compare the on-line count against the strip-wide estimate
    theta(T)/pi + 1 (whose correction term stays below 1 at these heights).

    certified requires the count to match the rounded estimate within 1 and
    not to fall below its floor: a count deficit is exactly what an off-line
    zero would produce.
    """
    if zeroset.source != "zeta_internal":
        raise DomainError("count check applies to internally found zeta zeros")
    expected = _theta(zeroset.height_bound) / math.pi + 1.0
    actual = len(zeroset)
    certified = abs(actual - round(expected)) <= 1 and actual >= math.floor(expected)
    return expected, actual, certified


def save_zeros_csv(zeroset: ZeroSet, path: str | Path) -> None:
    """Write one ordinate per line (12 significant digits, LF), preceded by
    a '# label=..., T=...' header."""
    lines = [f"# label={zeroset.label}, T={zeroset.height_bound:.12g}"]
    lines += [f"{g:.12g}" for g in zeroset.ordinates]
    Path(path).write_text("\n".join(lines) + "\n", encoding="ascii")


def load_zeros_csv(path: str | Path, label: str, height_bound: float) -> ZeroSet:
    """Ingest a zero-ordinate list: optional '#' header lines, then one
    positive decimal per line, strictly increasing, within (0, height_bound]."""
    ordinates: list[float] = []
    with open(path, "r", encoding="ascii") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            try:
                value = float(line)
            except ValueError:
                raise ParseError(
                    f"line {lineno}: not a decimal ordinate: {line!r}", lineno, line
                ) from None
            if not math.isfinite(value) or value <= 0.0:
                raise RangeError(f"line {lineno}: ordinate must be positive, got {line!r}")
            if value > height_bound:
                raise RangeError(
                    f"line {lineno}: ordinate {value} exceeds height bound {height_bound}"
                )
            if ordinates and value <= ordinates[-1]:
                raise ParseError(
                    f"line {lineno}: ordinates must be strictly increasing", lineno, line
                )
            ordinates.append(value)
    return ZeroSet(
        source="external_file",
        label=label,
        ordinates=np.array(ordinates, dtype=np.float64),
        height_bound=float(height_bound),
        count_certified=False,
    )


@dataclass(frozen=True)
class ExplicitFormulaRow:
    """One truncation check: exact prime-sum value against the zero-sum
    expansion cut at height T, with the truncation-shape column x log^2 x / T
    and the absolute-value majorant sum x^(1/2)/(1+|gamma|) reported
    separately (the signed sum and the majorant are different quantities;
    both columns are emitted rather than asserting their equality)."""

    x: float
    truncation_T: float
    exact_psi: float
    formula_value: float
    residual: float
    bound_shape: float
    abs_majorant: float


def _is_prime_power(n: int) -> bool:
    if n < 2:
        return False
    for p in range(2, int(n ** 0.5) + 1):
        if n % p == 0:
            while n % p == 0:
                n //= p
            return n == 1
    return True  # n itself prime


def explicit_formula_check(
    x: float,
    truncation_T: float,
    zeroset: ZeroSet,
    exact_psi: float,
) -> ExplicitFormulaRow:
    """Truncated zero-sum expansion of the prime-counting sum at x.

    For the zeta set the expansion is
        x - sum_{0<gamma<=T} 2 Re(x^rho / rho) - log 2 pi - (1/2) log(1-x^-2)
    with rho = 1/2 + i gamma; for ingested L-function sets only the zero sum
    (negated) is used, the bounded constant terms being outside desk scope.
    x must not be a prime power, keeping the jump convention out of play.
    """
    if x < 3.0:
        raise DomainError("x must be at least 3")
    if float(x).is_integer() and _is_prime_power(int(x)):
        raise DomainError(f"x = {x} is a prime power; pick a jump-free x")
    if truncation_T > zeroset.height_bound:
        raise InsufficientZeros(
            f"truncation T = {truncation_T} exceeds the set's height bound {zeroset.height_bound}"
        )
    gammas = zeroset.ordinates[zeroset.ordinates <= truncation_T]
    rho = 0.5 + 1j * gammas
    zero_sum = float(np.sum(2.0 * (x ** rho / rho).real))
    majorant = float(np.sum(math.sqrt(x) / (1.0 + gammas)))
    if zeroset.label == "zeta":
        formula = x - zero_sum - math.log(2.0 * math.pi) - 0.5 * math.log(1.0 - x ** -2.0)
    else:
        formula = -zero_sum
    residual = abs(exact_psi - formula)
    bound_shape = x * math.log(x) ** 2 / truncation_T
    return ExplicitFormulaRow(
        x=float(x),
        truncation_T=float(truncation_T),
        exact_psi=float(exact_psi),
        formula_value=float(formula),
        residual=float(residual),
        bound_shape=float(bound_shape),
        abs_majorant=majorant,
    )
