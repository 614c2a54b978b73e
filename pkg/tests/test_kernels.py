from __future__ import annotations

import math

import numpy as np
import pytest

from h8 import kernels
from h8.kernels import _py

try:
    from h8.kernels import _ext
except ImportError:
    _ext = None

BACKENDS = [_py] + ([_ext] if _ext is not None else [])


def trial_flags(limit: int) -> np.ndarray:
    out = np.zeros(limit + 1, dtype=np.uint8)
    for n in range(2, limit + 1):
        out[n] = all(n % d for d in range(2, math.isqrt(n) + 1))
    return out


@pytest.mark.parametrize("impl", BACKENDS)
class TestSieveFlags:
    @pytest.mark.parametrize("limit", [2, 3, 4, 5, 17, 100, 1000])
    def test_against_trial_division(self, impl, limit):
        assert np.array_equal(impl.sieve_flags(limit, 8), trial_flags(limit))

    def test_segment_boundaries(self, impl):
        full = impl.sieve_flags(10 ** 4, 10 ** 4)
        tiny = impl.sieve_flags(10 ** 4, 7)
        assert np.array_equal(full, tiny)


@pytest.mark.parametrize("impl", BACKENDS)
class TestResidueLogsums:
    def test_bucketing(self, impl):
        ns = np.array([2, 3, 4, 5, 9, 10], dtype=np.int64)
        ws = np.log(ns.astype(np.float64))
        out = impl.residue_logsums(ns, ws, 3)
        assert out.shape == (3,)
        assert abs(out[0] - (math.log(3) + math.log(9))) < 1e-15
        assert abs(out[1] - (math.log(4) + math.log(10))) < 1e-15
        assert abs(out[2] - (math.log(2) + math.log(5))) < 1e-15

    def test_empty(self, impl):
        out = impl.residue_logsums(np.empty(0, dtype=np.int64), np.empty(0), 5)
        assert np.array_equal(out, np.zeros(5))


@pytest.mark.parametrize("impl", BACKENDS)
class TestSurvivorMask:
    def test_divisibility(self, impl):
        shifts = np.array([1, 3, 6, 35, 49, 0], dtype=np.int64)
        small = np.array([2, 3, 5], dtype=np.int64)
        mask = impl.survivor_mask(shifts, small)
        assert list(mask) == [True, False, False, False, True, False]

    def test_no_sifting_primes(self, impl):
        shifts = np.array([4, 9], dtype=np.int64)
        mask = impl.survivor_mask(shifts, np.empty(0, dtype=np.int64))
        assert list(mask) == [True, True]


@pytest.mark.parametrize("impl", BACKENDS)
class TestUnpairedEvens:
    def test_real_flags_have_no_gaps(self, impl):
        flags = _py.sieve_flags(10 ** 4, 1 << 12)
        assert len(impl.unpaired_evens(flags, 6, 10 ** 4)) == 0

    def test_crafted_gap_detected(self, impl):
        # pretend only 3 and 5 are prime: 8 = 3+5 pairs, 12 = 5+7 does not
        flags = np.zeros(20, dtype=np.uint8)
        flags[3] = flags[5] = 1
        out = impl.unpaired_evens(flags, 6, 12)
        assert list(out) == [12]

    def test_range_clipping(self, impl):
        flags = _py.sieve_flags(100, 64)
        assert len(impl.unpaired_evens(flags, 0, 5)) == 0


@pytest.mark.skipif(_ext is None, reason="compiled extension not built")
class TestBackendParity:
    def test_bitwise_identical_outputs(self):
        flags_a = _py.sieve_flags(10 ** 5, 1 << 12)
        flags_b = _ext.sieve_flags(10 ** 5, 1 << 12)
        assert np.array_equal(flags_a, flags_b)

        ns = np.flatnonzero(flags_a).astype(np.int64)
        ws = np.log(ns.astype(np.float64))
        for q in (2, 7, 97, 1000):
            assert np.array_equal(
                _py.residue_logsums(ns, ws, q), _ext.residue_logsums(ns, ws, q)
            )

        shifts = (10 ** 5 - ns[ns < 10 ** 5]).astype(np.int64)
        shifts = shifts[shifts > 0]
        small = ns[ns < 50]
        assert np.array_equal(
            _py.survivor_mask(shifts, small), _ext.survivor_mask(shifts, small)
        )
        assert np.array_equal(
            _py.unpaired_evens(flags_a, 6, 10 ** 5),
            _ext.unpaired_evens(flags_a, 6, 10 ** 5),
        )


def test_selected_backend_exposes_contract():
    assert kernels.BACKEND in ("py", "ext")
    for name in ("sieve_flags", "residue_logsums", "survivor_mask", "unpaired_evens"):
        assert callable(getattr(kernels, name))
