"""Closed-form 2x2 complex matrix functions that stay valid at exceptional points"""
from __future__ import annotations

import logging
import math

import numpy as np
from attrs import field, frozen

from exceptions import DomainError

logger = logging.getLogger(__name__)

# |mu*s| below this uses the even series for cosh and sinh(mu s)/mu
SERIES_THRESHOLD = 1e-4

# Eigenvalue-coalescence tolerance in natural units (entries O(1) after scaling by kappa)
EP_TOL = 1e-9

_IDENTITY = np.eye(2, dtype=np.complex128)


def as_mat2(matrix) -> np.ndarray:
    """Validate and freeze a 2x2 complex matrix.

    Args:
        matrix: anything numpy can turn into a 2x2 array

    Returns:
        Read-only complex128 copy

    Raises:
        DomainError: wrong shape or non-finite entries
    """
    try:
        arr = np.array(matrix, dtype=np.complex128, copy=True)
    except (TypeError, ValueError) as e:
        raise DomainError(f"Cannot interpret value as a complex matrix: {e}") from e

    if arr.shape != (2, 2):
        raise DomainError(f"Expected a 2x2 matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise DomainError("Matrix entries must be finite")

    arr.setflags(write=False)
    return arr


def _check_scalar(value: float, name: str) -> float:
    try:
        s = float(value)
    except (TypeError, ValueError) as e:
        raise DomainError(f"{name} must be a real scalar, got {value!r}") from e
    if not math.isfinite(s):
        raise DomainError(f"{name} must be finite, got {value!r}")
    return s


def _cosh_sinhc_series(mu_sq: complex, s: float) -> tuple[complex, complex]:
    """cosh(mu s) and sinh(mu s)/mu from their even series in (mu s)^2"""
    x2 = mu_sq * s * s
    cosh = 1 + x2 / 2 + x2 * x2 / 24 + x2 * x2 * x2 / 720
    sinhc = s * (1 + x2 / 6 + x2 * x2 / 120 + x2 * x2 * x2 / 5040)
    return cosh, sinhc


def _cosh_sinhc_direct(mu: complex, s: float) -> tuple[complex, complex]:
    x = mu * s
    return complex(np.cosh(x)), complex(np.sinh(x) / mu)


def expm2(matrix, s: float) -> np.ndarray:
    """Exponential exp(s*M) of a 2x2 complex matrix.

    Uses the traceless split M = (tr/2) I + A with A^2 = mu^2 I, so that
    exp(sM) = e^{s tr/2} [cosh(mu s) I + sinh(mu s)/mu A]. The formula has no
    eigenbasis and remains exact for defective A (mu = 0).

    Args:
        matrix: 2x2 complex matrix M
        s: real step

    Returns:
        exp(s*M) as a complex128 array

    Raises:
        DomainError: non-finite input or overflow
    """
    m = as_mat2(matrix)
    s = _check_scalar(s, "s")

    half_tr = (m[0, 0] + m[1, 1]) / 2
    a = m - half_tr * _IDENTITY
    mu_sq = complex(-(a[0, 0] * a[1, 1] - a[0, 1] * a[1, 0]))

    if abs(mu_sq) * s * s < SERIES_THRESHOLD * SERIES_THRESHOLD:
        cosh, sinhc = _cosh_sinhc_series(mu_sq, s)
    else:
        cosh, sinhc = _cosh_sinhc_direct(complex(np.sqrt(mu_sq)), s)

    with np.errstate(over="ignore", invalid="ignore"):
        result = np.exp(s * half_tr) * (cosh * _IDENTITY + sinhc * a)

    if not np.all(np.isfinite(result)):
        raise DomainError(f"Matrix exponential overflowed for s={s}")
    return result


@frozen
class Spectrum2:
    """Eigenvalues of a 2x2 matrix with an exceptional-point flag"""

    lambda1: complex = field(converter=complex)
    lambda2: complex = field(converter=complex)
    discriminant: complex = field(converter=complex)
    defective: bool = field(converter=bool)

    @property
    def splitting(self) -> float:
        return abs(self.lambda1 - self.lambda2)


def eig2(matrix, tol: float = EP_TOL) -> Spectrum2:
    """Eigenvalues lambda = tr/2 +- sqrt((tr/2)^2 - det), principal square root.

    The matrix is flagged defective when the discriminant vanishes within
    ``tol`` while the matrix is not itself a multiple of the identity.
    """
    m = as_mat2(matrix)

    half_tr = complex((m[0, 0] + m[1, 1]) / 2)
    det = complex(m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0])
    disc = half_tr * half_tr - det
    root = complex(np.sqrt(disc))

    traceless = m - half_tr * _IDENTITY
    scalar_like = float(np.max(np.abs(traceless))) <= tol
    defective = abs(disc) <= tol and not scalar_like

    if defective:
        logger.debug(f"Defective matrix at discriminant {disc:.3e}")

    return Spectrum2(
        lambda1=half_tr + root,
        lambda2=half_tr - root,
        discriminant=disc,
        defective=defective,
    )


def svals2(matrix) -> tuple[float, float]:
    """Singular values (sigma_max, sigma_min) from the eigenvalues of M^dagger M"""
    m = as_mat2(matrix)

    # M^dagger M = [[p, w], [conj(w), q]]
    col0, col1 = m[:, 0], m[:, 1]
    p = float(np.sum(np.abs(col0) ** 2))
    q = float(np.sum(np.abs(col1) ** 2))
    w = complex(np.vdot(col0, col1))
    abs_det = abs(complex(m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]))

    gap = math.hypot((p - q) / 2, abs(w))
    sigma_max = math.sqrt((p + q) / 2 + gap)
    # sigma_max * sigma_min = |det M|
    sigma_min = abs_det / sigma_max if sigma_max > 0 else 0.0
    return sigma_max, min(sigma_min, sigma_max)
