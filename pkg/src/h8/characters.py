"""Dirichlet characters mod q: construction, Gauss sums, L-values and probes.

Characters are built from the cyclic decomposition of the unit group
(CRT over prime powers, primitive roots for odd prime powers, the
{-1} x <5> structure for powers of two) and stored as explicit value
tables for O(1) lookup inside prime sums. Enumeration order is the
mixed-radix order of the exponent vector over the group generators, which
makes labels deterministic across platforms.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import product

import numpy as np

from .config import DEFAULT_CONFIG, EvalConfig
from .errors import DomainError, PoleError
from .special_functions import (
    FE_L,
    LOGDERIV_L,
    IdentityReport,
    LOG_PI,
    _hurwitz_em_batch,
    _em_length,
    gamma_logderiv,
    log_gamma,
    zeta_family,
)

_MAX_MODULUS = 10_000


@dataclass(frozen=True)
class Character:
    """A Dirichlet character mod q held as an explicit value table.

    values[n] is chi(n mod q); entries at non-units are exactly zero.
    exponents is the character's coordinate vector over the unit-group
    generators; index is its mixed-radix rank, so the principal character
    of every modulus is "q.0".
    """

    modulus: int
    values: np.ndarray
    parity_delta: int
    conductor: int
    is_principal: bool
    is_primitive: bool
    index: int
    exponents: tuple[int, ...]

    @property
    def label(self) -> str:
        return f"{self.modulus}.{self.index}"

    def __call__(self, n: int) -> complex:
        return complex(self.values[n % self.modulus])

    def conjugate(self) -> "Character":
        gens = _unit_group(self.modulus)
        exps = tuple((-e) % d for e, (_, d) in zip(self.exponents, gens))
        return _build_character(self.modulus, exps)

    def __repr__(self) -> str:  # keep reprs short; value tables can be long
        kind = "principal" if self.is_principal else ("primitive" if self.is_primitive else "imprimitive")
        return f"Character({self.label}, {kind}, delta={self.parity_delta}, conductor={self.conductor})"


def _factorize(n: int) -> list[tuple[int, int]]:
    out = []
    m = n
    p = 2
    while p * p <= m:
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            out.append((p, e))
        p += 1
    if m > 1:
        out.append((m, 1))
    return out


def _primitive_root(pe: int, p: int) -> int:
    phi = pe - pe // p
    prime_factors = [f for f, _ in _factorize(phi)]
    for g in range(2, pe):
        if math.gcd(g, pe) != 1:
            continue
        if all(pow(g, phi // r, pe) != 1 for r in prime_factors):
            return g
    raise RuntimeError(f"no primitive root mod {pe}")  # unreachable for odd prime powers


@lru_cache(maxsize=None)
def _unit_group(q: int) -> tuple[tuple[int, int], ...]:
    """Generators of (Z/q)* lifted mod q, as (generator, order) pairs."""
    if q == 1:
        return ()
    gens: list[tuple[int, int]] = []
    for p, e in _factorize(q):
        pe = p ** e
        local: list[tuple[int, int]] = []
        if p == 2:
            if e == 1:
                continue
            if e == 2:
                local = [(3, 2)]
            else:
                local = [(pe - 1, 2), (5, 2 ** (e - 2))]
        else:
            local = [(_primitive_root(pe, p), pe - pe // p)]
        rest = q // pe
        for g, d in local:
            if rest == 1:
                gens.append((g % q, d))
            else:
                # CRT lift: equal to g mod p^e, equal to 1 mod q/p^e
                inv = pow(rest % pe, -1, pe)
                gens.append(((1 + rest * ((g - 1) * inv % pe)) % q, d))
    return tuple(gens)


@lru_cache(maxsize=None)
def _dlog_tables(q: int) -> tuple[np.ndarray, ...]:
    """Per-generator discrete-log arrays over [0, q); -1 at non-units."""
    gens = _unit_group(q)
    tables = [np.full(q, -1, dtype=np.int64) for _ in gens]
    for exps in product(*[range(d) for (_, d) in gens]):
        n = 1
        for (g, _), e in zip(gens, exps):
            n = n * pow(g, e, q) % q
        for t, e in zip(tables, exps):
            t[n] = e
    return tuple(tables)


def _snap(values: np.ndarray) -> np.ndarray:
    # quartic roots of unity come out exact, which keeps real characters
    # free of spurious imaginary dust in the big prime sums
    re, im = values.real.copy(), values.imag.copy()
    re[np.abs(re - np.round(re)) < 1e-12] = np.round(re[np.abs(re - np.round(re)) < 1e-12])
    im[np.abs(im - np.round(im)) < 1e-12] = np.round(im[np.abs(im - np.round(im)) < 1e-12])
    return re + 1j * im


def _conductor(q: int, values: np.ndarray) -> int:
    if q == 1:
        return 1
    divisors = sorted(d for d in range(1, q + 1) if q % d == 0)
    for d in divisors:
        trivial = True
        for a in range(1 + d, q + 1, d):
            if math.gcd(a, q) == 1 and abs(values[a % q] - 1.0) > 1e-9:
                trivial = False
                break
        if trivial:
            return d
    return q


def _build_character(q: int, exps: tuple[int, ...]) -> Character:
    gens = _unit_group(q)
    tables = _dlog_tables(q)
    size = max(q, 1)
    if q == 1:
        values = np.ones(1, dtype=np.complex128)
    else:
        angle = np.zeros(q, dtype=np.float64)
        unit_mask = tables[0] >= 0 if tables else np.array([math.gcd(n, q) == 1 for n in range(q)])
        for t, k, (_, d) in zip(tables, exps, gens):
            angle[unit_mask] += (k * t[unit_mask] % d) / d
        values = np.zeros(q, dtype=np.complex128)
        values[unit_mask] = np.exp(2j * math.pi * angle[unit_mask])
        values = _snap(values)
    if q == 1:
        unit_mask = np.ones(1, dtype=bool)
    index = 0
    for k, (_, d) in zip(exps, gens):
        index = index * d + k
    parity = round((1.0 - values[(q - 1) % size].real) / 2.0)
    conductor = _conductor(q, values)
    return Character(
        modulus=q,
        values=values,
        parity_delta=int(parity),
        conductor=conductor,
        is_principal=all(e == 0 for e in exps),
        is_primitive=(conductor == q),
        index=index,
        exponents=exps,
    )


def enumerate_characters(q: int) -> list[Character]:
    """All phi(q) characters mod q, ordered by exponent vector (principal first)."""
    if not 1 <= q <= _MAX_MODULUS:
        raise DomainError(f"modulus must lie in [1, {_MAX_MODULUS}], got {q}")
    gens = _unit_group(q)
    out = [_build_character(q, exps) for exps in product(*[range(d) for (_, d) in gens])]
    out.sort(key=lambda c: c.index)
    return out


def gauss_sum(chi: Character) -> complex:
    """tau(chi) = sum over n of chi(n) e(n/q), by direct summation."""
    q = chi.modulus
    n = np.arange(1, q + 1)
    return complex(np.sum(chi.values[n % q] * np.exp(2j * np.pi * n / q)))


@dataclass(frozen=True)
class LEvalResult:
    """L(s, chi) together with the reflection factor and the functional
    equation residual (None unless chi is primitive; the identity is only
    stated for primitive characters here, so the probe suppresses the
    residual rather than reporting a spurious failure)."""

    l_value: complex
    a_factor: complex
    fe_residual: float | None


def _l_value(s: complex, chi: Character, cfg: EvalConfig) -> complex:
    q = chi.modulus
    if q == 1:
        return zeta_family(s, cfg=cfg)
    if abs(s - 1.0) < 1e-12:
        if chi.is_principal:
            raise PoleError("L(s, principal chi) has a pole at s = 1")
        # pole cancellation is exact at s = 1: use the digamma form instead
        # of the Hurwitz combination, which is singular termwise
        a = np.arange(1, q)
        units = a[np.abs(chi.values[a]) > 0.5]
        total = sum(chi.values[n] * gamma_logderiv(n / q, cfg) for n in units)
        return complex(-total / q)
    s = complex(s)
    a_over_q = np.arange(1, q + 1, dtype=np.float64) / q
    m = _em_length(s, cfg)
    hz = _hurwitz_em_batch(s, a_over_q, m, cfg.em_correction_terms)
    coeffs = chi.values[np.arange(1, q + 1) % q]
    return complex(q ** (-s) * np.sum(coeffs * hz))


def a_factor(s: complex, chi: Character) -> complex:
    """Reflection factor for L(s, chi): (tau/(i^delta sqrt q)) (q/pi)^(1/2-s)
    Gamma((1-s+delta)/2) / Gamma((s+delta)/2).

    Branch conventions: principal branch throughout, sqrt(q) positive real.
    """
    q, delta = chi.modulus, chi.parity_delta
    s = complex(s)
    tau = gauss_sum(chi)
    pref = tau / (1j ** delta * math.sqrt(q))
    log_ratio = log_gamma((1.0 - s + delta) / 2.0) - log_gamma((s + delta) / 2.0)
    return pref * cmath.exp((0.5 - s) * (math.log(q) - LOG_PI) + log_ratio)


def l_eval(s: complex, chi: Character, cfg: EvalConfig = DEFAULT_CONFIG) -> LEvalResult:
    """Evaluate L(s, chi) via the Hurwitz decomposition
    q^(-s) sum_a chi(a) zeta(s, a/q), plus the reflection factor and the
    functional-equation residual |L(s,chi) - A(s,chi) L(1-s, conj chi)|
    for primitive chi."""
    value = _l_value(s, chi, cfg)
    try:
        a_val = a_factor(s, chi)
    except PoleError:
        # A(s, chi) hits a Gamma pole (cancelled by a trivial L zero on the
        # other side); the factor and the residual are not evaluable there
        return LEvalResult(l_value=value, a_factor=complex(math.nan, math.nan), fe_residual=None)
    residual = None
    if chi.is_primitive and chi.modulus > 1:
        mirrored = _l_value(1.0 - complex(s), chi.conjugate(), cfg)
        residual = abs(value - a_val * mirrored)
    return LEvalResult(l_value=value, a_factor=a_val, fe_residual=residual)


def _log_a_chi(s: complex, chi: Character) -> complex:
    q, delta = chi.modulus, chi.parity_delta
    return (0.5 - s) * (math.log(q) - LOG_PI) + log_gamma((1.0 - s + delta) / 2.0) - log_gamma(
        (s + delta) / 2.0
    )


def log_a_chi_derivative_oracle(s: complex, chi: Character) -> complex:
    """Numerical d/ds log A(s, chi), same stencil as the zeta-side oracle.
    The constant tau/(i^delta sqrt q) prefactor drops out of differences."""
    z = complex(s)
    h = 1e-5 * max(1.0, abs(z))

    def stencil(step: float) -> complex:
        return (
            _log_a_chi(z - 2 * step, chi) - 8 * _log_a_chi(z - step, chi)
            + 8 * _log_a_chi(z + step, chi) - _log_a_chi(z + 2 * step, chi)
        ) / (12 * step)

    return (16.0 * stencil(h / 2.0) - stencil(h)) / 15.0


def a_logderiv_closed(s: complex, chi: Character, cfg: EvalConfig = DEFAULT_CONFIG) -> complex:
    """The stated closed form (1/2)psi((s+delta)/2) + (1/2)psi((1-s+delta)/2)
    + log pi, evaluated exactly as written, uncorrected."""
    delta = chi.parity_delta
    return (
        0.5 * gamma_logderiv((complex(s) + delta) / 2.0, cfg)
        + 0.5 * gamma_logderiv((1.0 - complex(s) + delta) / 2.0, cfg)
        + LOG_PI
    )


def _l_logderiv(s: complex, chi: Character, cfg: EvalConfig) -> complex:
    h = cfg.derivative_step * max(1.0, abs(complex(s)))

    def stencil(step: float) -> complex:
        f = [
            _l_value(complex(s) + k * step, chi, cfg)
            for k in (-2, -1, 1, 2)
        ]
        return (f[0] - 8 * f[1] + 8 * f[2] - f[3]) / (12 * step)

    d = (16.0 * stencil(h / 2.0) - stencil(h)) / 15.0
    return d / _l_value(complex(s), chi, cfg)


def l_fe_probe(
    chi: Character,
    sample_points: list[complex],
    cfg: EvalConfig = DEFAULT_CONFIG,
    tolerance: float | None = None,
) -> IdentityReport:
    """Functional-equation residual report for one primitive character."""
    if not chi.is_primitive or chi.modulus == 1:
        raise _not_primitive(chi)
    tol = cfg.tolerance_default if tolerance is None else tolerance
    residuals: list[float] = []
    skipped: list[tuple[int, str]] = []
    for i, point in enumerate(sample_points):
        res = l_eval(complex(point), chi, cfg).fe_residual
        if res is None:
            residuals.append(math.nan)
            skipped.append((i, "reflection factor not evaluable at this point"))
        else:
            residuals.append(float(res))
    return IdentityReport.from_residuals(
        FE_L, sample_points, residuals, tol, skipped, subject=chi.label
    )


def l_identity_probe(
    chi: Character,
    sample_points: list[complex],
    cfg: EvalConfig = DEFAULT_CONFIG,
    tolerance: float | None = None,
) -> IdentityReport:
    """Log-derivative identity residuals for L(s, chi), primitive chi:

    residual_i = |L'/L(s_i, chi) + L'/L(1-s_i, conj chi) - D(s_i)|

    with D the numerical oracle for d/ds log A(s, chi). The stated closed
    form is evaluated alongside; its signed difference against the oracle is
    stored in signed_differences (same ledger pattern as the zeta case).
    """
    if not chi.is_primitive or chi.modulus == 1:
        raise _not_primitive(chi)
    tol = 1e-6 if tolerance is None else tolerance
    chibar = chi.conjugate()
    residuals: list[float] = []
    signed: list[complex] = []
    skipped: list[tuple[int, str]] = []
    for i, point in enumerate(sample_points):
        s = complex(point)
        lhs_val = _l_value(s, chi, cfg)
        rhs_val = _l_value(1.0 - s, chibar, cfg)
        if min(abs(lhs_val), abs(rhs_val)) < 1e-3:
            residuals.append(math.nan)
            skipped.append((i, "within the guard band of an L zero"))
            signed.append(complex(math.nan))
            continue
        lhs = _l_logderiv(s, chi, cfg) + _l_logderiv(1.0 - s, chibar, cfg)
        oracle = log_a_chi_derivative_oracle(s, chi)
        residuals.append(abs(lhs - oracle))
        signed.append(a_logderiv_closed(s, chi, cfg) - oracle)
    return IdentityReport.from_residuals(
        LOGDERIV_L, sample_points, residuals, tol, skipped, signed, subject=chi.label
    )


def _not_primitive(chi: Character):
    from .errors import NotPrimitiveError

    return NotPrimitiveError(f"{chi.label} is not primitive (conductor {chi.conductor})")
