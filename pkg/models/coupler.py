"""Hamiltonians and propagators of the lossy and the sandwiched directional coupler.

Mode index 1 (row/column 0) is the lossless waveguide, mode index 2
(row/column 1) is the lossy waveguide. Propagation follows
i dpsi/dz = H psi, so U(z) = exp(-i H z) is subunitary for gamma >= 0.
"""
from __future__ import annotations

import logging
import math
from enum import StrEnum
from typing import Sequence

import numpy as np
from attrs import evolve, field, frozen

from core.linalg import expm2
from exceptions import DomainError, ValidationError

logger = logging.getLogger(__name__)

# Sine-bend amplitude (um) -> loss rate (1/cm); 8 samples, 0.5 um steps
DEFAULT_LOSS_CALIBRATION: tuple[tuple[float, float], ...] = tuple(
    (float(a), float(g))
    for a, g in zip(np.linspace(0.0, 3.5, 8), np.linspace(0.0, 0.63, 8))
)
DEFAULT_SAMPLE_AMPLITUDES: tuple[float, ...] = tuple(
    a for a, _ in DEFAULT_LOSS_CALIBRATION
)


class SystemKind(StrEnum):
    BARE = "bare"
    SANDWICHED = "sandwiched"


def _positive(instance, attribute, value) -> None:
    if not math.isfinite(value) or value <= 0:
        raise ValidationError(f"{attribute.name} must be positive and finite, got {value}")


def _non_negative(instance, attribute, value) -> None:
    if not math.isfinite(value) or value < 0:
        raise ValidationError(
            f"{attribute.name} must be non-negative and finite, got {value}"
        )


@frozen
class CouplerParams:
    """Coupling kappa (1/cm), loss gamma (1/cm) and propagation length z (cm)"""

    kappa: float = field(converter=float, validator=_positive)
    gamma: float = field(converter=float, validator=_non_negative)
    length: float = field(converter=float, validator=_positive)

    @property
    def loss_ratio(self) -> float:
        return self.gamma / self.kappa

    def with_gamma(self, gamma: float) -> CouplerParams:
        return evolve(self, gamma=gamma)

    def with_length(self, length: float) -> CouplerParams:
        return evolve(self, length=length)


def balanced_length(kappa: float) -> float:
    """Length at which the lossless coupler splits 50/50 (kappa z = pi/4)"""
    if kappa <= 0:
        raise ValidationError(f"kappa must be positive, got {kappa}")
    return math.pi / (4 * kappa)


def hamiltonian_bare(p: CouplerParams) -> np.ndarray:
    """[[0, kappa], [kappa, -2i gamma]]"""
    return np.array(
        [[0.0, p.kappa], [p.kappa, -2j * p.gamma]],
        dtype=np.complex128,
    )


def hamiltonian_sandwiched(p: CouplerParams) -> np.ndarray:
    """R H R^-1 in closed form: asymmetric couplings, symmetric loss"""
    return np.array(
        [[-1j * p.gamma, p.kappa - p.gamma], [p.kappa + p.gamma, -1j * p.gamma]],
        dtype=np.complex128,
    )


def rotation_R() -> np.ndarray:
    """The 50/50 rotation (1/sqrt 2)[[1, -i], [-i, 1]]"""
    return np.array([[1.0, -1j], [-1j, 1.0]], dtype=np.complex128) / math.sqrt(2)


def hamiltonian(p: CouplerParams, kind: SystemKind) -> np.ndarray:
    if SystemKind(kind) is SystemKind.SANDWICHED:
        return hamiltonian_sandwiched(p)
    return hamiltonian_bare(p)


def propagator(p: CouplerParams, kind: SystemKind = SystemKind.BARE) -> np.ndarray:
    """U(z) = exp(-i H z) for the chosen system"""
    return expm2(-1j * hamiltonian(p, kind), p.length)


def gamma_from_amplitude(
    amplitudes: Sequence[float],
    calibration: Sequence[tuple[float, float]] = DEFAULT_LOSS_CALIBRATION,
) -> list[float]:
    """
    Map sine-bend amplitudes to loss rates by linear interpolation.

    Args:
        amplitudes: bend amplitudes in um
        calibration: (amplitude_um, gamma_per_cm) pairs, amplitude ascending

    Returns:
        Loss rates in 1/cm, one per amplitude

    Raises:
        DomainError: amplitude outside the calibrated range
    """
    if len(calibration) < 2:
        raise DomainError("Loss calibration needs at least two points")

    table = np.asarray(calibration, dtype=float)
    xs, ys = table[:, 0], table[:, 1]
    if np.any(np.diff(xs) <= 0):
        raise DomainError("Loss calibration amplitudes must be strictly ascending")

    amps = np.asarray(amplitudes, dtype=float)
    if amps.size and (amps.min() < xs[0] or amps.max() > xs[-1]):
        raise DomainError(
            f"Amplitude outside calibrated range [{xs[0]}, {xs[-1]}] um"
        )

    return [float(g) for g in np.interp(amps, xs, ys)]
