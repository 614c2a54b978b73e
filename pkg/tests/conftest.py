from __future__ import annotations

import pytest

from h8.primes import build_prime_table


@pytest.fixture(scope="session")
def table_small():
    return build_prime_table(20_000)


@pytest.fixture(scope="session")
def table_big():
    # large enough for the 1e6 scans plus the cutoff-doubling stability check
    return build_prime_table(2_000_000)
