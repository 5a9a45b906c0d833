"""Tests for the closed-form 2x2 matrix functions"""
import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings
from hypothesis import strategies as st

from core.linalg import (
    SERIES_THRESHOLD,
    _cosh_sinhc_direct,
    _cosh_sinhc_series,
    as_mat2,
    eig2,
    expm2,
    svals2,
)
from exceptions import DomainError
from tests.oracles import expm_taylor, random_unit_disc

entries = st.complex_numbers(max_magnitude=2.0, allow_nan=False, allow_infinity=False)
matrices = st.lists(entries, min_size=4, max_size=4).map(lambda v: np.array(v).reshape(2, 2))


class TestAsMat2:
    """Test input validation"""

    def test_returns_read_only_complex_copy(self):
        """Test that a real list becomes a frozen complex128 array"""
        m = as_mat2([[1, 2], [3, 4]])
        assert m.dtype == np.complex128
        assert not m.flags.writeable

    def test_wrong_shape(self):
        """Test that non-2x2 input is rejected"""
        with pytest.raises(DomainError, match="2x2"):
            as_mat2(np.eye(3))

    def test_non_finite(self):
        """Test that NaN entries are rejected"""
        with pytest.raises(DomainError, match="finite"):
            as_mat2([[np.nan, 0], [0, 1]])


class TestExpm2:
    """Test the closed-form matrix exponential"""

    def test_zero_matrix(self):
        """Test exp(0) = I"""
        np.testing.assert_array_equal(expm2(np.zeros((2, 2)), 3.0), np.eye(2))

    def test_zero_step(self):
        """Test exp(0 * M) = I"""
        np.testing.assert_allclose(expm2([[1, 2j], [3, -1]], 0.0), np.eye(2), atol=1e-15)

    def test_diagonal(self):
        """Test diagonal matrices exponentiate elementwise"""
        result = expm2(np.diag([0.3j, -0.7]), 2.0)
        np.testing.assert_allclose(result, np.diag(np.exp([0.6j, -1.4])), atol=1e-14)

    def test_jordan_block_is_exact(self):
        """Test a defective matrix: exp(s[[a,1],[0,a]]) = e^{as}[[1,s],[0,1]]"""
        a, s = -0.4j, 2.5
        result = expm2([[a, 1.0], [0.0, a]], s)
        expected = np.exp(a * s) * np.array([[1.0, s], [0.0, 1.0]])
        np.testing.assert_allclose(result, expected, atol=1e-14)

    def test_series_and_direct_branches_agree(self):
        """Test the two cosh/sinhc evaluations meet at the switch-over"""
        for phase in (0.0, 0.7, np.pi / 2, 2.0):
            mu = SERIES_THRESHOLD * np.exp(1j * phase)
            cosh_s, sinhc_s = _cosh_sinhc_series(mu * mu, 1.0)
            cosh_d, sinhc_d = _cosh_sinhc_direct(mu, 1.0)
            assert abs(cosh_s - cosh_d) < 1e-15
            assert abs(sinhc_s - sinhc_d) < 1e-15

    def test_matches_taylor_oracle(self, rng):
        """Test 1000 random matrices, 100 of them within 1e-6 of an exceptional point"""
        worst = 0.0
        for i in range(1000):
            s = rng.uniform(0, 5)
            if i < 100:
                c = random_unit_disc(rng, ())
                y, z = random_unit_disc(rng, 2)
                delta = 1e-13 * random_unit_disc(rng, ())
                x = np.sqrt(delta - y * z)
                m = 0.5 * np.array([[c + x, y], [z, c - x]])
                assert abs(np.sqrt(0.25 * (x * x + y * z))) < 1e-6
            else:
                m = random_unit_disc(rng, (2, 2))

            expected = expm_taylor(m, s)
            error = np.max(np.abs(expm2(m, s) - expected))
            worst = max(worst, error / max(1.0, np.max(np.abs(expected))))
        assert worst <= 1e-10

    @settings(derandomize=True, deadline=None, max_examples=200)
    @given(m=matrices, s=st.floats(min_value=-3.0, max_value=3.0))
    def test_matches_scipy(self, m, s):
        """Test agreement with scipy.linalg.expm"""
        expected = scipy.linalg.expm(s * m)
        scale = max(1.0, np.max(np.abs(expected)))
        np.testing.assert_allclose(expm2(m, s), expected, atol=1e-9 * scale)

    @settings(derandomize=True, deadline=None, max_examples=100)
    @given(m=matrices, s=st.floats(min_value=-1.0, max_value=1.0), t=st.floats(min_value=-1.0, max_value=1.0))
    def test_semigroup(self, m, s, t):
        """Test exp((s+t)M) = exp(sM) exp(tM)"""
        lhs = expm2(m, s + t)
        rhs = expm2(m, s) @ expm2(m, t)
        scale = max(1.0, np.max(np.abs(lhs)))
        np.testing.assert_allclose(lhs, rhs, atol=1e-10 * scale)

    def test_overflow(self):
        """Test that an overflowing exponential raises"""
        with pytest.raises(DomainError, match="overflow"):
            expm2(10 * np.eye(2), 1e3)

    def test_non_finite_step(self):
        """Test that s must be finite"""
        with pytest.raises(DomainError):
            expm2(np.eye(2), float("inf"))


class TestEig2:
    """Test the closed-form eigenvalues"""

    def test_hermitian(self):
        """Test [[0,1],[1,0]] has eigenvalues +1 and -1"""
        spectrum = eig2([[0, 1], [1, 0]])
        assert spectrum.lambda1 == pytest.approx(1)
        assert spectrum.lambda2 == pytest.approx(-1)
        assert not spectrum.defective

    def test_exceptional_point_is_defective(self):
        """Test a coalesced, non-diagonalizable matrix is flagged"""
        kappa = 0.26
        spectrum = eig2([[0, kappa], [kappa, -2j * kappa]])
        assert spectrum.defective
        assert spectrum.lambda1 == pytest.approx(-1j * kappa, abs=1e-15)
        assert spectrum.lambda2 == pytest.approx(-1j * kappa, abs=1e-15)
        assert spectrum.splitting == pytest.approx(0, abs=1e-15)

    def test_scalar_matrix_is_not_defective(self):
        """Test a multiple of the identity has a double but non-defective eigenvalue"""
        spectrum = eig2(2j * np.eye(2))
        assert spectrum.lambda1 == spectrum.lambda2 == 2j
        assert not spectrum.defective

    @settings(derandomize=True, deadline=None, max_examples=200)
    @given(m=matrices)
    def test_trace_and_determinant(self, m):
        """Test lambda1 + lambda2 = tr M and lambda1 lambda2 = det M"""
        spectrum = eig2(m)
        assert abs(spectrum.lambda1 + spectrum.lambda2 - np.trace(m)) <= 1e-12
        assert abs(spectrum.lambda1 * spectrum.lambda2 - np.linalg.det(m)) <= 1e-11


class TestSvals2:
    """Test the closed-form singular values"""

    def test_unitary(self):
        """Test a unitary matrix has unit singular values"""
        r = np.array([[1, -1j], [-1j, 1]]) / np.sqrt(2)
        sigma_max, sigma_min = svals2(r)
        assert sigma_max == pytest.approx(1, abs=1e-14)
        assert sigma_min == pytest.approx(1, abs=1e-14)

    def test_singular(self):
        """Test a rank-one matrix has sigma_min = 0"""
        sigma_max, sigma_min = svals2([[1, 2], [2, 4]])
        assert sigma_max == pytest.approx(5)
        assert sigma_min == 0

    @settings(derandomize=True, deadline=None, max_examples=200)
    @given(m=matrices)
    def test_matches_svd(self, m):
        """Test agreement with scipy.linalg.svdvals"""
        expected = scipy.linalg.svdvals(m)
        sigma_max, sigma_min = svals2(m)
        assert sigma_max == pytest.approx(expected[0], abs=1e-12)
        assert sigma_min == pytest.approx(expected[1], abs=1e-11)
