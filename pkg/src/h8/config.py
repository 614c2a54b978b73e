"""Evaluation configuration shared by the special-function and zero machinery."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DomainError


@dataclass(frozen=True)
class EvalConfig:
    """Tuning knobs for series evaluation and numerical differentiation.

    euler_maclaurin_cutoff: minimum direct-sum length before the tail
        correction takes over; the effective length also grows with |Im s|.
    em_correction_terms: number of even-order correction terms appended to
        the direct sum (each consumes one Bernoulli number).
    derivative_step: base step for central-difference derivatives.
    series_terms: default truncation for slowly converging probe series.
    tolerance_default: residual threshold below which an identity "holds".
    """

    euler_maclaurin_cutoff: int = 50
    em_correction_terms: int = 8
    derivative_step: float = 1e-3
    series_terms: int = 1_000_000
    tolerance_default: float = 1e-8

    def __post_init__(self):
        if self.euler_maclaurin_cutoff < 10:
            raise DomainError("euler_maclaurin_cutoff must be >= 10")
        if not 2 <= self.em_correction_terms <= 12:
            raise DomainError("em_correction_terms must lie in [2, 12]")
        if not 0.0 < self.derivative_step <= 1e-2:
            raise DomainError("derivative_step must lie in (0, 1e-2]")
        if self.series_terms < 1:
            raise DomainError("series_terms must be positive")
        if self.tolerance_default <= 0.0:
            raise DomainError("tolerance_default must be positive")


DEFAULT_CONFIG = EvalConfig()
