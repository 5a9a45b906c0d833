"""Tests for the Ryser permanent"""
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from core.permanent import MAX_PERMANENT_SIZE, permanent
from exceptions import DomainError
from tests.oracles import naive_permanent, random_unit_disc


class TestPermanent:
    """Test permanent values and input checks"""

    def test_one_by_one(self):
        """Test perm([[a]]) = a"""
        assert permanent([[2 - 3j]]) == 2 - 3j

    def test_two_by_two(self):
        """Test perm([[a,b],[c,d]]) = ad + bc"""
        assert permanent([[1, 2], [3, 4]]) == pytest.approx(10)

    def test_identity(self):
        """Test perm(I) = 1"""
        assert permanent(np.eye(6)) == pytest.approx(1, abs=1e-12)

    @pytest.mark.parametrize("n", [2, 3, 5, 7])
    def test_all_ones(self, n):
        """Test perm(J_n) = n!"""
        assert permanent(np.ones((n, n))) == pytest.approx(math.factorial(n), rel=1e-12)

    def test_sum_spans_several_chunks(self, rng):
        """Test n = 13, whose 8191 Ryser terms are summed in several partial sums"""
        assert permanent(np.ones((13, 13))) == pytest.approx(math.factorial(13), rel=1e-12)
        diag = 1 + 0.5 * random_unit_disc(rng, 13)
        assert abs(permanent(np.diag(diag)) - np.prod(diag)) <= 1e-9

    def test_matches_naive_enumeration(self, rng):
        """Test 200 random complex matrices up to 5x5 against the permutation sum"""
        for _ in range(200):
            n = int(rng.integers(1, 6))
            a = random_unit_disc(rng, (n, n))
            expected = naive_permanent(a)
            scale = max(1.0, abs(naive_permanent(np.abs(a))))
            assert abs(permanent(a) - expected) <= 1e-12 * scale

    @pytest.mark.parametrize("n", [6, 7])
    def test_larger_gray_code_walks(self, rng, n):
        """Test sizes where the Gray-code walk revisits columns many times"""
        a = random_unit_disc(rng, (n, n))
        expected = naive_permanent(a)
        assert abs(permanent(a) - expected) <= 1e-11 * max(1.0, abs(naive_permanent(np.abs(a))))

    @settings(derandomize=True, deadline=None, max_examples=50)
    @given(
        n=st.integers(min_value=2, max_value=4),
        seed=st.integers(min_value=0, max_value=2**32 - 1),
        scale=st.complex_numbers(min_magnitude=0.1, max_magnitude=2.0, allow_nan=False, allow_infinity=False),
    )
    def test_invariances(self, n, seed, scale):
        """Test invariance under row/column permutations and perm(cA) = c^n perm(A)"""
        rng = np.random.default_rng(seed)
        a = random_unit_disc(rng, (n, n))
        rows, cols = rng.permutation(n), rng.permutation(n)
        base = permanent(a)

        assert permanent(a[rows][:, cols]) == pytest.approx(base, abs=1e-12)
        assert permanent(scale * a) == pytest.approx(scale**n * base, abs=1e-11)

    def test_non_square(self):
        """Test that a non-square matrix is rejected"""
        with pytest.raises(DomainError, match="square"):
            permanent(np.ones((2, 3)))

    def test_empty(self):
        """Test that n = 0 is rejected"""
        with pytest.raises(DomainError, match="out of range"):
            permanent(np.zeros((0, 0)))

    def test_too_large(self):
        """Test the size cap"""
        n = MAX_PERMANENT_SIZE + 1
        with pytest.raises(DomainError, match="out of range"):
            permanent(np.zeros((n, n)))

    def test_non_finite(self):
        """Test that infinite entries are rejected"""
        with pytest.raises(DomainError, match="finite"):
            permanent([[1, np.inf], [0, 1]])
