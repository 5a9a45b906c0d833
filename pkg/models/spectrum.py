"""Eigenvalue spectrum of the bare lossy coupler along a loss sweep"""
from __future__ import annotations

import logging
from typing import Sequence

from attrs import frozen

from core.linalg import EP_TOL, eig2
from exceptions import DomainError
from models.coupler import CouplerParams, hamiltonian_bare

logger = logging.getLogger(__name__)


@frozen
class SpectrumPoint:
    gamma: float
    gamma_over_kappa: float
    re_l1: float
    re_l2: float
    im_l1: float
    im_l2: float
    defective: bool

    @property
    def lambda1(self) -> complex:
        return complex(self.re_l1, self.im_l1)

    @property
    def lambda2(self) -> complex:
        return complex(self.re_l2, self.im_l2)


def _canonical(a: complex, b: complex) -> tuple[complex, complex]:
    """Larger real part first, then larger imaginary part"""
    if (a.real, a.imag) >= (b.real, b.imag):
        return a, b
    return b, a


def _match(
    previous: tuple[complex, complex], current: tuple[complex, complex], tol: float
) -> tuple[complex, complex]:
    """Nearest-neighbour assignment of the current pair onto the previous branches"""
    p1, p2 = previous
    a, b = _canonical(*current)
    keep = abs(a - p1) + abs(b - p2)
    swap = abs(b - p1) + abs(a - p2)
    # Ambiguous right at or across a coalescence: fall back to canonical order
    if abs(keep - swap) <= tol:
        return a, b
    return (b, a) if swap < keep else (a, b)


def eigen_spectrum(gammas: Sequence[float], kappa: float) -> list[SpectrumPoint]:
    """
    Eigenvalues of H_bare(kappa, gamma) for each gamma, branch-sorted by continuity.

    The first point is ordered canonically, so at gamma = 0 lambda1 = +kappa.
    Across the exceptional point lambda1 continues on the less damped branch.

    Args:
        gammas: loss rates in 1/cm (>= 0), in sweep order
        kappa: coupling rate in 1/cm (> 0)

    Returns:
        One SpectrumPoint per gamma, raw (not kappa-normalized) eigenvalues

    Raises:
        DomainError: empty gamma list
        ValidationError: kappa <= 0 or gamma < 0
    """
    if len(gammas) == 0:
        raise DomainError("Eigenvalue sweep needs at least one gamma value")

    points: list[SpectrumPoint] = []
    previous: tuple[complex, complex] | None = None
    base = CouplerParams(kappa=kappa, gamma=0.0, length=1.0)

    for gamma in gammas:
        params = base.with_gamma(gamma)
        spectrum = eig2(hamiltonian_bare(params))
        if spectrum.defective:
            logger.debug(
                f"Exceptional point at gamma={params.gamma:g}, splitting {spectrum.splitting:.3g}"
            )
        pair = (spectrum.lambda1, spectrum.lambda2)

        tol = EP_TOL * max(params.kappa, params.gamma)
        if previous is None:
            l1, l2 = _canonical(*pair)
        else:
            l1, l2 = _match(previous, pair, tol)
        previous = (l1, l2)

        points.append(
            SpectrumPoint(
                gamma=params.gamma,
                gamma_over_kappa=params.loss_ratio,
                re_l1=l1.real,
                re_l2=l2.real,
                im_l1=l1.imag,
                im_l2=l2.imag,
                defective=spectrum.defective,
            )
        )

    logger.debug(f"Computed spectrum for {len(points)} loss values at kappa={kappa}")
    return points
