"""Desk-scale numerical laboratory for classical analytic number theory.

Modules:
    special_functions  complex log-gamma/digamma, Hurwitz zeta, identity probes
    characters         Dirichlet characters, Gauss sums, L-values, L probes
    zeros              critical-line zero search, count certification,
                       zero-list ingestion, truncation checks
    primes             segmented sieve, Chebyshev sums, progression errors,
                       arithmetic constants
    sieve_lab          weighted linear sieve, boundary functions, bounds
    goldbach_twin      even-N representation and twin scans
    cli                the `h8` command-line surface
"""

from .config import DEFAULT_CONFIG, EvalConfig
from .kernels import BACKEND as KERNEL_BACKEND

__version__ = "0.1.0"

__all__ = ["DEFAULT_CONFIG", "EvalConfig", "KERNEL_BACKEND", "__version__"]
