"""Matrix permanent via Ryser's formula in Gray-code order"""
import logging
import math

import numpy as np

from exceptions import DomainError

logger = logging.getLogger(__name__)

MAX_PERMANENT_SIZE = 20
# Terms buffered before each exact partial sum
_FSUM_CHUNK = 4096


def permanent(matrix) -> complex:
    """
    Permanent of a square complex matrix.

    perm(A) = (-1)^n sum_{S} (-1)^{|S|} prod_i sum_{j in S} a_ij, with the
    column subsets S visited in Gray-code order so each step adds or removes
    a single column from the running row sums. O(2^n n).

    Args:
        matrix: n x n array-like, 1 <= n <= 20

    Returns:
        The permanent as a Python complex

    Raises:
        DomainError: non-square, non-finite, or n outside [1, 20]
    """
    a = np.asarray(matrix, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DomainError(f"Permanent needs a square matrix, got shape {a.shape}")

    n = a.shape[0]
    if not 1 <= n <= MAX_PERMANENT_SIZE:
        raise DomainError(
            f"Permanent size n={n} out of range [1, {MAX_PERMANENT_SIZE}]"
        )
    if not np.all(np.isfinite(a)):
        raise DomainError("Permanent input must be finite")

    if n == 1:
        return complex(a[0, 0])

    row_sums = np.zeros(n, dtype=np.complex128)
    subset_size = 0
    real_terms: list[float] = []
    imag_terms: list[float] = []
    real_partials: list[float] = []
    imag_partials: list[float] = []

    for k in range(1, 1 << n):
        col = (k & -k).bit_length() - 1
        gray = k ^ (k >> 1)
        if (gray >> col) & 1:
            row_sums += a[:, col]
            subset_size += 1
        else:
            row_sums -= a[:, col]
            subset_size -= 1

        term = complex(np.prod(row_sums))
        if subset_size % 2:
            term = -term
        real_terms.append(term.real)
        imag_terms.append(term.imag)
        if len(real_terms) == _FSUM_CHUNK:
            real_partials.append(math.fsum(real_terms))
            imag_partials.append(math.fsum(imag_terms))
            real_terms.clear()
            imag_terms.clear()

    real_partials.append(math.fsum(real_terms))
    imag_partials.append(math.fsum(imag_terms))
    result = complex(math.fsum(real_partials), math.fsum(imag_partials))
    return -result if n % 2 else result
