"""Complex special functions and identity probes.

Provides log-gamma and digamma on the complex plane, the Hurwitz zeta family
by Euler-Maclaurin continuation, the reflection factor A(s) with both its
stated closed-form log-derivative and a numerical-differentiation oracle,
and residual probes for the functional-equation and log-derivative
identities. Probes never "correct" a stated formula: each closed form is
evaluated exactly as given and the discrepancy against the oracle is part
of the report.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .config import DEFAULT_CONFIG, EvalConfig
from .errors import DomainError, GuardError, PoleError

EULER_GAMMA = float(np.euler_gamma)
LOG_PI = math.log(math.pi)

# identity ids used across the probe reports
FE_ZETA = "FE_ZETA"
FE_L = "FE_L"
LOGDERIV_ZETA = "LOGDERIV_ZETA"
LOGDERIV_L = "LOGDERIV_L"
AFORM_CLOSED_VS_ORACLE = "AFORM_CLOSED_VS_ORACLE"
SYMMETRY_SERIES = "SYMMETRY_SERIES"
THETA_PSI_EQUIV = "THETA_PSI_EQUIV"

IDENTITY_IDS = (
    FE_ZETA,
    FE_L,
    LOGDERIV_ZETA,
    LOGDERIV_L,
    AFORM_CLOSED_VS_ORACLE,
    SYMMETRY_SERIES,
    THETA_PSI_EQUIV,
)

# asymptotic coefficients B_{2k}/(2k) for digamma and
# B_{2k}/(2k(2k-1)) for log-gamma, k = 1..8
_PSI_COEF = (
    1.0 / 12, -1.0 / 120, 1.0 / 252, -1.0 / 240,
    1.0 / 132, -691.0 / 32760, 1.0 / 12, -3617.0 / 8160,
)
_LG_COEF = (
    1.0 / 12, -1.0 / 360, 1.0 / 1260, -1.0 / 1680,
    1.0 / 1188, -691.0 / 360360, 1.0 / 156, -3617.0 / 122400,
)
# B_{2k} for k = 1..12 (Euler-Maclaurin corrections)
_B2K = (
    1.0 / 6, -1.0 / 30, 1.0 / 42, -1.0 / 30, 5.0 / 66, -691.0 / 2730,
    7.0 / 6, -3617.0 / 510, 43867.0 / 798, -174611.0 / 330,
    854513.0 / 138, -236364091.0 / 2730,
)
_B2K_OVER_FACT = tuple(b / math.factorial(2 * (k + 1)) for k, b in enumerate(_B2K))

_ASY_SHIFT = 12.0  # recurrence pushes Re(z) past this before Stirling


def _near_nonpositive_integer(z: complex, tol: float = 1e-12) -> bool:
    if abs(z.imag) > tol:
        return False
    r = round(z.real)
    return r <= 0 and abs(z.real - r) <= tol


def log_gamma(s: complex) -> complex:
    """Analytic continuation of log Gamma via recurrence plus Stirling series.

    exp(log_gamma(s)) equals Gamma(s) everywhere away from the poles; the
    continuation is smooth in any small disc avoiding the poles, which is
    what the numerical differentiation oracle needs.
    """
    z = complex(s)
    if _near_nonpositive_integer(z):
        raise PoleError(f"log_gamma pole at s = {z}")
    acc = 0.0 + 0.0j
    while z.real < _ASY_SHIFT:
        acc -= cmath.log(z)
        z += 1.0
    res = (z - 0.5) * cmath.log(z) - z + 0.5 * math.log(2.0 * math.pi)
    t = 1.0 / z
    zz = z * z
    for c in _LG_COEF:
        res += c * t
        t /= zz
    return res + acc


def gamma_logderiv(s: complex, cfg: EvalConfig = DEFAULT_CONFIG) -> complex:
    """Digamma: the log-derivative of the Gamma product, by recurrence plus
    the asymptotic series (equivalent to differentiating the product
    termwise, but numerically stable)."""
    z = complex(s)
    if _near_nonpositive_integer(z):
        raise PoleError(f"digamma pole at s = {z}")
    acc = 0.0 + 0.0j
    while z.real < _ASY_SHIFT:
        acc -= 1.0 / z
        z += 1.0
    res = cmath.log(z) - 0.5 / z
    inv2 = 1.0 / (z * z)
    t = inv2
    for c in _PSI_COEF:
        res -= c * t
        t *= inv2
    return res + acc


def _hurwitz_em_batch(s: complex, a_values: np.ndarray, m_terms: int, k_terms: int) -> np.ndarray:
    """Euler-Maclaurin Hurwitz zeta for one s and a batch of offsets a."""
    s = complex(s)
    a = np.asarray(a_values, dtype=np.float64)
    n = np.arange(m_terms, dtype=np.float64)[None, :] + a[:, None]
    direct = np.sum(n ** (-s), axis=1)
    w = m_terms + a
    vals = direct + w ** (1.0 - s) / (s - 1.0) + 0.5 * w ** (-s)
    rising = s
    wpow = w ** (-s - 1.0)
    winv2 = w ** -2.0
    for k in range(1, k_terms + 1):
        vals = vals + _B2K_OVER_FACT[k - 1] * rising * wpow
        rising = rising * (s + 2 * k - 1) * (s + 2 * k)
        wpow = wpow * winv2
    return vals


def _em_length(s: complex, cfg: EvalConfig) -> int:
    return max(cfg.euler_maclaurin_cutoff, int(10.0 * abs(s.imag)) + 1)


def _hurwitz(s: complex, a: float, cfg: EvalConfig) -> complex:
    m = _em_length(s, cfg)
    return complex(_hurwitz_em_batch(s, np.array([a]), m, cfg.em_correction_terms)[0])


def zeta_family(
    s: complex,
    a: float = 1.0,
    order: int = 0,
    cfg: EvalConfig = DEFAULT_CONFIG,
) -> complex:
    """Order-th derivative of the Hurwitz zeta zeta(s, a); a = 1 gives zeta(s).

    Continuation by Euler-Maclaurin summation, reliable well beyond the
    strip -2 <= Re(s) <= 3 the probes use. Derivatives use central
    differences with one Richardson level; the step grows with the order to
    balance roundoff against truncation.
    """
    z = complex(s)
    if abs(z - 1.0) < 1e-12:
        raise PoleError("zeta(s, a) has its pole at s = 1")
    if not 0.0 < a <= 1.0:
        raise DomainError(f"offset a must lie in (0, 1], got {a}")
    if not 0 <= order <= 3:
        raise DomainError(f"derivative order capped at 3, got {order}")
    if order == 0:
        return _hurwitz(z, a, cfg)
    # k-th derivative stencils lose k powers of h to roundoff, so the step
    # widens with the order
    h = cfg.derivative_step * max(1.0, abs(z)) * (1.0, 3.0, 10.0)[order - 1]

    def deriv(step: float) -> complex:
        pts = [z - 2 * step, z - step, z + step, z + 2 * step]
        f = [_hurwitz(p, a, cfg) for p in pts]
        if order == 1:
            return (f[0] - 8 * f[1] + 8 * f[2] - f[3]) / (12 * step)
        if order == 2:
            fc = _hurwitz(z, a, cfg)
            return (-f[0] + 16 * f[1] - 30 * fc + 16 * f[2] - f[3]) / (12 * step * step)
        return (f[3] - 2 * f[2] + 2 * f[1] - f[0]) / (2 * step ** 3)

    d1 = deriv(h)
    d2 = deriv(h / 2.0)
    return (16.0 * d2 - d1) / 15.0


def chi_factor(s: complex, cfg: EvalConfig = DEFAULT_CONFIG) -> tuple[complex, complex]:
    """The reflection factor A(s) and its closed-form log-derivative.

    A(s) = pi^(s-1/2) Gamma((1-s)/2) / Gamma(s/2), computed through
    log_gamma. The second return value is the stated closed form
    (1/2)psi(s/2) + (1/2)psi((1-s)/2) + log(pi), evaluated exactly as
    written; compare it against log_a_derivative_oracle to see whether it
    matches d/ds log A.
    """
    z = complex(s)
    half = z / 2.0
    half_ref = (1.0 - z) / 2.0
    if _near_nonpositive_integer(half) or _near_nonpositive_integer(half_ref):
        raise PoleError(f"A(s) hits a Gamma pole/zero at s = {z}")
    a_value = cmath.exp((z - 0.5) * LOG_PI + log_gamma(half_ref) - log_gamma(half))
    closed = 0.5 * gamma_logderiv(half, cfg) + 0.5 * gamma_logderiv(half_ref, cfg) + LOG_PI
    return a_value, closed


def _log_a(z: complex) -> complex:
    return (z - 0.5) * LOG_PI + log_gamma((1.0 - z) / 2.0) - log_gamma(z / 2.0)


def log_a_derivative_oracle(s: complex, cfg: EvalConfig = DEFAULT_CONFIG) -> complex:
    """Numerical d/ds log A(s): 4-point central differences on log_gamma with
    one Richardson level. Kept independent of any stated closed form."""
    z = complex(s)
    h = 1e-5 * max(1.0, abs(z))

    def stencil(step: float) -> complex:
        return (
            _log_a(z - 2 * step) - 8 * _log_a(z - step)
            + 8 * _log_a(z + step) - _log_a(z + 2 * step)
        ) / (12 * step)

    return (16.0 * stencil(h / 2.0) - stencil(h)) / 15.0


@dataclass(frozen=True)
class SymmetryProbeInput:
    """Inputs for the off-line-deviation series probe.

    alpha: deviation from the critical line, in [0, 1/2].
    gamma_ord: imaginary part of the probed zero, nonzero.
    delta: parity shift (0 for the zeta case).
    terms: series truncation; the partial sum runs n = 0..terms inclusive.
    """

    alpha: float
    gamma_ord: float
    delta: int = 0
    terms: int = 1_000_000

    def __post_init__(self):
        if not 0.0 <= self.alpha <= 0.5:
            raise DomainError("alpha must lie in [0, 1/2]")
        if self.gamma_ord == 0.0:
            raise DomainError("gamma_ord must be nonzero")
        if self.delta not in (0, 1):
            raise DomainError("delta must be 0 or 1")
        if self.terms < 1:
            raise DomainError("terms must be positive")


def symmetry_series_probe(inp: SymmetryProbeInput) -> tuple[float, float, float]:
    """Partial sum of the stated deviation series next to the direct
    digamma combination it is supposed to represent.

    Returns (series_value, digamma_value, difference) where
    series_value  = sum_{n=0}^{terms} -alpha*gamma*(n + delta/2 + 1/4) / D_n,
    D_n = ((n + delta/2 + 1/4)^2 - gamma^2/4 - alpha^2/4)^2
          + gamma^2 (n + delta/2 + 1/4)^2,
    digamma_value = Im[psi((rho+delta)/2) + psi((1-rho+delta)/2)
                       - psi((conj rho+delta)/2) - psi((1-conj rho+delta)/2)]
    for rho = 1/2 + alpha + i*gamma, and difference = series - digamma.
    When alpha = 0 the series is identically zero (every summand carries the
    factor alpha) and the digamma terms cancel in conjugate pairs; both
    returns are exact zeros in that case.
    """
    alpha, gam, delta = inp.alpha, inp.gamma_ord, float(inp.delta)
    m = np.arange(0, inp.terms + 1, dtype=np.float64) + (delta / 2.0 + 0.25)
    denom = (m * m - gam * gam / 4.0 - alpha * alpha / 4.0) ** 2 + gam * gam * m * m
    if float(np.min(denom)) < 1e-30:
        raise GuardError("series denominator underflows the 1e-30 guard")
    series_value = float(np.sum(-alpha * gam * m / denom))

    # four digamma arguments built so the alpha = 0 cancellation is bitwise
    a1 = complex(0.5 + alpha + delta, gam) / 2.0
    a2 = complex(0.5 - alpha + delta, -gam) / 2.0
    a3 = complex(0.5 + alpha + delta, -gam) / 2.0
    a4 = complex(0.5 - alpha + delta, gam) / 2.0
    combo = (
        gamma_logderiv(a1) + gamma_logderiv(a2)
        - gamma_logderiv(a3) - gamma_logderiv(a4)
    )
    digamma_value = combo.imag
    return series_value, digamma_value, series_value - digamma_value


@dataclass
class IdentityReport:
    """Probe outcome for one identity over a set of sample points.

    residuals[i] is NaN when point i was skipped (too close to a pole or a
    zero of a constituent function); skipped points are listed with reasons
    rather than silently dropped. verdict is "holds" iff the max residual
    over evaluated points is within tolerance, "inconclusive" when nothing
    could be evaluated.
    """

    identity_id: str
    sample_points: list
    residuals: list[float]
    max_residual: float
    tolerance: float
    verdict: str
    skipped: list[tuple[int, str]] = field(default_factory=list)
    signed_differences: list[complex] = field(default_factory=list)
    subject: str = ""

    @classmethod
    def from_residuals(
        cls,
        identity_id: str,
        sample_points: list,
        residuals: list[float],
        tolerance: float,
        skipped: list[tuple[int, str]] | None = None,
        signed_differences: list[complex] | None = None,
        subject: str = "",
    ) -> "IdentityReport":
        finite = [r for r in residuals if not math.isnan(r)]
        if finite:
            max_res = max(finite)
            verdict = "holds" if max_res <= tolerance else "fails"
        else:
            max_res = math.nan
            verdict = "inconclusive"
        return cls(
            identity_id=identity_id,
            sample_points=list(sample_points),
            residuals=residuals,
            max_residual=max_res,
            tolerance=tolerance,
            verdict=verdict,
            skipped=skipped or [],
            signed_differences=signed_differences or [],
            subject=subject,
        )


_SKIP_RADIUS = 0.05  # probes keep this distance from poles and zeros


def _skip_reason(identity_id: str, s: complex, cfg: EvalConfig) -> str | None:
    if min(abs(s), abs(s - 1.0)) < _SKIP_RADIUS:
        return "within 0.05 of the zeta pole at s=0/1 reflection pair"
    half, half_ref = s / 2.0, (1.0 - s) / 2.0
    for w in (half, half_ref):
        r = round(w.real)
        if r <= 0 and abs(w - r) < _SKIP_RADIUS:
            return "within 0.05 of a Gamma factor pole"
    if identity_id == LOGDERIV_ZETA:
        if abs(zeta_family(s, cfg=cfg)) < 1e-3 or abs(zeta_family(1.0 - s, cfg=cfg)) < 1e-3:
            return "within the guard band of a zeta zero"
    return None


def identity_probe(
    identity_id: str,
    sample_points: list,
    cfg: EvalConfig = DEFAULT_CONFIG,
    tolerance: float | None = None,
) -> IdentityReport:
    """Residual probe for the zeta-side identities.

    FE_ZETA: residual |zeta(s) - A(s) zeta(1-s)|.
    LOGDERIV_ZETA: residual |zeta'/zeta(s) + zeta'/zeta(1-s) - D(s)| with
        D(s) the numerical-differentiation oracle for d/ds log A(s).
    AFORM_CLOSED_VS_ORACLE: residual |closed(s) - D(s)| where closed is the
        stated log-derivative form; the signed difference is recorded.
    SYMMETRY_SERIES: points are SymmetryProbeInput values; the residual is
        |series - digamma| from symmetry_series_probe.

    The L-function identities (FE_L, LOGDERIV_L) live in the characters
    module, the theta/psi comparison in the primes module.
    """
    tol = cfg.tolerance_default if tolerance is None else tolerance
    if identity_id not in (FE_ZETA, LOGDERIV_ZETA, AFORM_CLOSED_VS_ORACLE, SYMMETRY_SERIES):
        raise DomainError(
            f"identity_probe handles zeta-side identities only, got {identity_id!r}"
        )
    residuals: list[float] = []
    skipped: list[tuple[int, str]] = []
    signed: list[complex] = []

    for i, point in enumerate(sample_points):
        if identity_id == SYMMETRY_SERIES:
            probe_in = point if isinstance(point, SymmetryProbeInput) else SymmetryProbeInput(*point)
            _, _, diff = symmetry_series_probe(probe_in)
            residuals.append(abs(diff))
            signed.append(complex(diff))
            continue
        s = complex(point)
        reason = _skip_reason(identity_id, s, cfg)
        if reason is not None:
            residuals.append(math.nan)
            skipped.append((i, reason))
            continue
        if identity_id == FE_ZETA:
            a_value, _ = chi_factor(s, cfg)
            diff = zeta_family(s, cfg=cfg) - a_value * zeta_family(1.0 - s, cfg=cfg)
        elif identity_id == LOGDERIV_ZETA:
            lhs = (
                zeta_family(s, order=1, cfg=cfg) / zeta_family(s, cfg=cfg)
                + zeta_family(1.0 - s, order=1, cfg=cfg) / zeta_family(1.0 - s, cfg=cfg)
            )
            diff = lhs - log_a_derivative_oracle(s, cfg)
        else:  # AFORM_CLOSED_VS_ORACLE
            _, closed = chi_factor(s, cfg)
            diff = closed - log_a_derivative_oracle(s, cfg)
        residuals.append(abs(diff))
        signed.append(diff)

    return IdentityReport.from_residuals(
        identity_id, sample_points, residuals, tol, skipped, signed
    )
