from __future__ import annotations

import cmath
import math

import numpy as np
import pytest

from h8.errors import DomainError, GuardError, PoleError
from h8.special_functions import (
    AFORM_CLOSED_VS_ORACLE,
    EULER_GAMMA,
    FE_ZETA,
    LOGDERIV_ZETA,
    SYMMETRY_SERIES,
    IdentityReport,
    SymmetryProbeInput,
    chi_factor,
    gamma_logderiv,
    identity_probe,
    log_a_derivative_oracle,
    log_gamma,
    symmetry_series_probe,
    zeta_family,
)


def digamma_series_oracle(z: float, terms: int = 10 ** 7) -> float:
    """Independent digamma: -gamma + sum (1/(k+1) - 1/(k+z)), with the
    closed-form tail (z-1)*sum 1/((k+1)(k+z)) approximated past the cutoff."""
    k = np.arange(terms, dtype=np.float64)
    partial = float(np.sum(1.0 / (k + 1.0) - 1.0 / (k + z)))
    tail = (z - 1.0) / terms  # sum_{k>=terms} ~ integral, error O(1/terms^2)
    return -EULER_GAMMA + partial + tail


class TestGammaLogderiv:
    def test_at_one(self):
        assert abs(gamma_logderiv(1.0) - (-EULER_GAMMA)) < 1e-10

    def test_at_two_recurrence_value(self):
        assert abs(gamma_logderiv(2.0) - (1.0 - EULER_GAMMA)) < 1e-10

    def test_at_half_against_series_oracle(self):
        want = digamma_series_oracle(0.5)
        got = gamma_logderiv(0.5)
        assert abs(got - want) < 1e-6  # oracle tail is the limiting factor
        assert abs(got - (-1.9635100260214235)) < 1e-9

    @pytest.mark.parametrize("s", [0.0, -1.0, -2.0, -7.0])
    def test_pole_error(self, s):
        with pytest.raises(PoleError):
            gamma_logderiv(s)

    def test_recurrence_on_random_strip(self):
        rng = np.random.default_rng(11)
        for _ in range(50):
            s = complex(rng.uniform(-3, 4), rng.uniform(-40, 40))
            if abs(s.imag) < 0.1 and abs(s - round(s.real)) < 0.1:
                continue
            lhs = gamma_logderiv(s + 1.0) - gamma_logderiv(s)
            assert abs(lhs - 1.0 / s) < 1e-10

    def test_log_gamma_consistent_with_digamma(self):
        for s in (complex(0.7, 2.0), complex(3.2, -5.0), complex(-1.3, 1.1)):
            h = 1e-6
            fd = (log_gamma(s + h) - log_gamma(s - h)) / (2 * h)
            assert abs(fd - gamma_logderiv(s)) < 1e-6

    def test_log_gamma_exponentiates_to_gamma(self):
        assert abs(cmath.exp(log_gamma(0.5)) - math.sqrt(math.pi)) < 1e-12
        assert abs(cmath.exp(log_gamma(5.0)) - 24.0) < 1e-10
        assert abs(cmath.exp(log_gamma(-0.5)) - (-2.0 * math.sqrt(math.pi))) < 1e-10


def zeta2_series_oracle() -> float:
    n = np.arange(1, 10 ** 6 + 1, dtype=np.float64)
    partial = float(np.sum(1.0 / (n * n)))
    m = 10 ** 6
    return partial + 1.0 / m - 1.0 / (2.0 * m * m)  # integral tail + midpoint


def hurwitz2_half_series_oracle() -> float:
    n = np.arange(0, 10 ** 6, dtype=np.float64) + 0.5
    partial = float(np.sum(1.0 / (n * n)))
    m = 10 ** 6 - 0.5
    return partial + 1.0 / m - 1.0 / (2.0 * m * m)


class TestZetaFamily:
    def test_zeta_two_against_series_oracle(self):
        want = zeta2_series_oracle()
        assert abs(zeta_family(2.0) - want) < 1e-9
        assert abs(zeta_family(2.0) - math.pi ** 2 / 6.0) < 1e-10

    def test_hurwitz_half_against_series_oracle(self):
        want = hurwitz2_half_series_oracle()
        assert abs(zeta_family(2.0, a=0.5) - want) < 1e-9
        assert abs(zeta_family(2.0, a=0.5) - math.pi ** 2 / 2.0) < 1e-10

    def test_continuation_at_zero(self):
        # zeta(0, a) = 1/2 - a pins the continuation left of the pole
        assert abs(zeta_family(0.0) - (-0.5)) < 1e-12
        for a in (0.7, 0.25, 0.05):
            assert abs(zeta_family(0.0, a=a) - (0.5 - a)) < 1e-11
        # and the reflection factor carries zeta(0) to zeta(1-s) correctly
        s = 0.25
        a_val, _ = chi_factor(s)
        assert abs(zeta_family(s) - a_val * zeta_family(1.0 - s)) < 1e-10

    def test_spot_values(self):
        assert abs(zeta_family(-1.0) - (-1.0 / 12.0)) < 1e-12
        assert abs(zeta_family(0.5) - (-1.4603545088095868)) < 1e-10

    def test_pole_and_domain_errors(self):
        with pytest.raises(PoleError):
            zeta_family(1.0)
        with pytest.raises(DomainError):
            zeta_family(2.0, a=1.5)
        with pytest.raises(DomainError):
            zeta_family(2.0, a=0.0)
        with pytest.raises(DomainError):
            zeta_family(2.0, order=4)

    def test_conjugate_symmetry(self):
        rng = np.random.default_rng(3)
        for _ in range(30):
            s = complex(rng.uniform(-2, 3), rng.uniform(0.5, 40))
            assert abs(zeta_family(s.conjugate()) - zeta_family(s).conjugate()) < 1e-10

    def test_first_derivative_matches_independent_differences(self):
        for s in (2.0 + 0.0j, complex(0.3, 5.0), complex(-0.5, 12.0)):
            d = zeta_family(s, order=1)
            h = 1e-4 * max(1.0, abs(s))  # independent step
            fd = (zeta_family(s + h) - zeta_family(s - h)) / (2 * h)
            assert abs(d - fd) / max(1.0, abs(d)) < 1e-5

    def test_known_first_derivative_at_two(self):
        assert abs(zeta_family(2.0, order=1) - (-0.937548254315843)) < 1e-9


class TestChiFactor:
    def test_symmetry_point(self):
        a_val, _ = chi_factor(0.5)
        assert abs(a_val - 1.0) < 1e-12

    def test_at_two_closed_gamma_values(self):
        a_val, _ = chi_factor(2.0)
        assert abs(a_val - (-2.0 * math.pi ** 2)) < 1e-9
        # consistency: A(2) zeta(-1) = zeta(2)
        assert abs(a_val * zeta_family(-1.0) - zeta_family(2.0)) < 1e-10

    @pytest.mark.parametrize("s", [0.0, -2.0, 1.0, 3.0])
    def test_pole_lattice(self, s):
        with pytest.raises(PoleError):
            chi_factor(s)

    def test_closed_form_is_as_stated(self):
        s = complex(0.3, 5.0)
        _, closed = chi_factor(s)
        by_hand = (
            0.5 * gamma_logderiv(s / 2.0)
            + 0.5 * gamma_logderiv((1.0 - s) / 2.0)
            + math.log(math.pi)
        )
        assert closed == by_hand


class TestIdentityProbes:
    def test_fe_zeta_at_two(self):
        rep = identity_probe(FE_ZETA, [2.0 + 0.0j])
        assert rep.verdict == "holds"
        assert rep.max_residual < 1e-10

    def test_fe_zeta_on_line(self):
        rep = identity_probe(FE_ZETA, [complex(0.5, 3.0)])
        assert rep.max_residual < 1e-8

    def test_fe_grid_holds(self):
        points = [
            complex(r, i)
            for r in (-1.0, -0.25, 0.5, 1.25, 2.0)
            for i in np.linspace(-28.0, 28.0, 9)
        ]
        rep = identity_probe(FE_ZETA, points, tolerance=1e-8)
        evaluated = [r for r in rep.residuals if not math.isnan(r)]
        assert len(evaluated) >= 40
        assert rep.verdict == "holds"

    def test_logderiv_zeta_residuals(self):
        points = [complex(0.3, 5.0), complex(2.0, 1.0), complex(-0.5, 10.0)]
        rep = identity_probe(LOGDERIV_ZETA, points, tolerance=1e-6)
        assert rep.verdict == "holds"

    def test_aform_signed_discrepancy_matches_prediction(self):
        # the closed form should differ from the oracle by exactly
        # psi(s/2) + psi((1-s)/2); frozen value at 0.3 + 5i
        s = complex(0.3, 5.0)
        rep = identity_probe(AFORM_CLOSED_VS_ORACLE, [s])
        assert rep.verdict == "fails"
        frozen = complex(1.8308385838278539, 0.0802275734429794)
        assert abs(rep.signed_differences[0] - frozen) < 1e-6
        predicted = gamma_logderiv(s / 2.0) + gamma_logderiv((1.0 - s) / 2.0)
        assert abs(rep.signed_differences[0] - predicted) < 1e-6

    def test_points_near_pole_are_skipped_and_flagged(self):
        rep = identity_probe(FE_ZETA, [complex(1.0, 0.01), complex(0.5, 3.0)])
        assert len(rep.residuals) == len(rep.sample_points)
        assert math.isnan(rep.residuals[0])
        assert rep.skipped and rep.skipped[0][0] == 0
        assert not math.isnan(rep.residuals[1])

    def test_unknown_identity_rejected(self):
        with pytest.raises(DomainError):
            identity_probe("FE_L", [2.0 + 0.0j])

    def test_report_verdict_invariant(self):
        rep = IdentityReport.from_residuals("FE_ZETA", [1, 2], [1e-9, 2e-9], 1e-8)
        assert rep.verdict == "holds"
        rep = IdentityReport.from_residuals("FE_ZETA", [1], [2e-8], 1e-8)
        assert rep.verdict == "fails"
        rep = IdentityReport.from_residuals("FE_ZETA", [1], [math.nan], 1e-8)
        assert rep.verdict == "inconclusive"


class TestSymmetrySeries:
    def test_alpha_zero_is_exactly_zero(self):
        series, dig, diff = symmetry_series_probe(
            SymmetryProbeInput(alpha=0.0, gamma_ord=14.13, delta=0, terms=1000)
        )
        assert series == 0.0
        assert dig == 0.0
        assert diff == 0.0

    def test_frozen_probe_values(self):
        series, dig, diff = symmetry_series_probe(
            SymmetryProbeInput(alpha=0.25, gamma_ord=14.0, delta=0, terms=10 ** 6)
        )
        assert abs(series - (-0.03572569242531644)) < 1e-9
        assert abs(dig - (-0.0714513848541329)) < 1e-9
        assert abs(diff - (series - dig)) == 0.0
        # the stated series carries exactly half of the digamma combination
        assert abs(dig - 2.0 * series) < 1e-9

    def test_probe_report_records_mismatch(self):
        rep = identity_probe(
            SYMMETRY_SERIES,
            [SymmetryProbeInput(alpha=0.25, gamma_ord=14.0, delta=0, terms=10 ** 4)],
        )
        assert rep.verdict == "fails"

    def test_guard_error(self):
        with pytest.raises(GuardError):
            symmetry_series_probe(
                SymmetryProbeInput(alpha=0.5, gamma_ord=1e-20, delta=0, terms=10)
            )

    def test_domain_validation(self):
        with pytest.raises(DomainError):
            SymmetryProbeInput(alpha=0.6, gamma_ord=1.0)
        with pytest.raises(DomainError):
            SymmetryProbeInput(alpha=0.1, gamma_ord=0.0)
        with pytest.raises(DomainError):
            SymmetryProbeInput(alpha=0.1, gamma_ord=1.0, delta=2)


class TestOracleConsistency:
    def test_true_derivative_sign_structure(self):
        # d/ds log A has minus signs on both digamma halves; verify the
        # oracle against that independent closed form
        for s in (complex(0.3, 5.0), complex(1.6, -2.0)):
            oracle = log_a_derivative_oracle(s)
            analytic = (
                math.log(math.pi)
                - 0.5 * gamma_logderiv(s / 2.0)
                - 0.5 * gamma_logderiv((1.0 - s) / 2.0)
            )
            assert abs(oracle - analytic) < 1e-8
