"""Post-selected two-photon and n-photon statistics of a subunitary mode transformation.

All probabilities are post-selected against the full input: they are the
probabilities that both photons survive and land in the given output
pattern, so p20 + p11 + p02 <= 1 with equality only for unitary U.
Matrix convention: U[i, j] is the amplitude from input mode j to output mode i.
"""
from __future__ import annotations

import logging
import math
from enum import StrEnum
from typing import Optional, Sequence

import numpy as np
from attrs import field, frozen

from core.linalg import as_mat2, svals2
from core.permanent import permanent
from exceptions import (
    DegenerateNormalizationError,
    DomainError,
    UnphysicalTransformError,
    ValidationError,
)

logger = logging.getLogger(__name__)

PASSIVITY_TOL = 1e-9
MAX_PHOTONS = 6
MAX_MODES = 8


class Normalization(StrEnum):
    NONE = "none"
    SURVIVORS = "survivors"
    DIST_RATE = "dist_rate"


def _non_negative(instance, attribute, value) -> None:
    if not math.isfinite(value) or value < 0:
        raise ValidationError(f"{attribute.name} must be finite and >= 0, got {value}")


@frozen
class TwoPhotonProbs:
    """Outcome probabilities for one photon injected into each waveguide.

    p20: both photons in mode 1 (lossless), p11: one per mode, p02: both in mode 2 (lossy).
    """

    p20: float = field(converter=float, validator=_non_negative)
    p11: float = field(converter=float, validator=_non_negative)
    p02: float = field(converter=float, validator=_non_negative)

    @property
    def total(self) -> float:
        """Probability that both photons survive"""
        return self.p20 + self.p11 + self.p02

    def scaled(self, factor: float) -> TwoPhotonProbs:
        return TwoPhotonProbs(
            p20=self.p20 * factor, p11=self.p11 * factor, p02=self.p02 * factor
        )

    def as_dict(self, suffix: str = "") -> dict[str, float]:
        return {
            f"p20{suffix}": self.p20,
            f"p11{suffix}": self.p11,
            f"p02{suffix}": self.p02,
        }


def _tau_c_valid(instance, attribute, value) -> None:
    if not math.isfinite(value) or value <= 0:
        raise ValidationError(f"tau_c must be positive, got {value}")


def _v_max_valid(instance, attribute, value) -> None:
    if not 0.0 <= value <= 1.0:
        raise ValidationError(f"v_max must lie in [0, 1], got {value}")


@frozen
class SourceModel:
    """Photon-pair source: Gaussian overlap exp(-(tau/tau_c)^2) scaled by v_max.

    tau_c is in ps. accidentals is the flat accidental-coincidence floor as a
    fraction of the distinguishable coincidence rate.
    """

    tau_c: float = field(default=0.15, converter=float, validator=_tau_c_valid)
    v_max: float = field(default=0.95, converter=float, validator=_v_max_valid)
    accidentals: float = field(default=0.0, converter=float, validator=_non_negative)

    def overlap(self, delays) -> np.ndarray:
        tau = np.asarray(delays, dtype=float)
        return np.exp(-((tau / self.tau_c) ** 2))


@frozen
class HomCurve:
    delays: tuple[float, ...]
    rates: tuple[float, ...]
    visibility: float


def _check_physical(u: np.ndarray) -> None:
    sigma_max, _ = svals2(u)
    if sigma_max > 1 + PASSIVITY_TOL:
        raise UnphysicalTransformError(
            f"Transformation amplifies light: sigma_max={sigma_max:.12g}"
        )


def two_photon_probs_indist(matrix) -> TwoPhotonProbs:
    """Indistinguishable photons, input |1,1>: permanent rule"""
    u = as_mat2(matrix)
    _check_physical(u)
    u11, u12, u21, u22 = u[0, 0], u[0, 1], u[1, 0], u[1, 1]
    return TwoPhotonProbs(
        p20=2 * abs(u11 * u12) ** 2,
        p11=abs(u11 * u22 + u12 * u21) ** 2,
        p02=2 * abs(u21 * u22) ** 2,
    )


def two_photon_probs_dist(matrix) -> TwoPhotonProbs:
    """Distinguishable photons: each photon routed independently.

    No factor 2 on p20/p02; two labelled photons in one mode are a single
    compound event.
    """
    u = as_mat2(matrix)
    _check_physical(u)
    a11, a12, a21, a22 = (abs(x) ** 2 for x in (u[0, 0], u[0, 1], u[1, 0], u[1, 1]))
    return TwoPhotonProbs(
        p20=a11 * a12,
        p11=a11 * a22 + a12 * a21,
        p02=a21 * a22,
    )


def interference_term(matrix) -> float:
    """J = 2 Re[(U11 U22) conj(U12 U21)], so p11_indist = p11_dist + J"""
    u = as_mat2(matrix)
    _check_physical(u)
    direct = u[0, 0] * u[1, 1]
    exchange = u[0, 1] * u[1, 0]
    return float(2 * np.real(direct * np.conj(exchange)))


def _dist_coincidences(u: np.ndarray, accidentals: float) -> float:
    p11_dist = two_photon_probs_dist(u).p11
    if p11_dist <= 0:
        raise DegenerateNormalizationError(
            "Distinguishable coincidence probability is zero; HOM rate undefined"
        )
    return p11_dist * (1 + accidentals)


def visibility(matrix, v_max: float, accidentals: float = 0.0) -> float:
    """
    HOM visibility V = -v_max J / p11_dist.

    V > 0 is a dip, V < 0 a peak.

    Raises:
        DegenerateNormalizationError: p11_dist == 0
    """
    u = as_mat2(matrix)
    if not 0.0 <= v_max <= 1.0:
        raise ValidationError(f"v_max must lie in [0, 1], got {v_max}")
    if accidentals < 0:
        raise ValidationError(f"accidentals must be >= 0, got {accidentals}")
    reference = _dist_coincidences(u, accidentals)
    return -v_max * interference_term(u) / reference


def hom_curve(matrix, src: SourceModel, delays: Sequence[float]) -> HomCurve:
    """
    Coincidence rate versus delay, normalized to the distinguishable rate.

    rate(tau) = 1 - V f(tau) with overlap f(tau) = exp(-(tau/tau_c)^2).

    Args:
        matrix: 2x2 mode transformation
        src: source model
        delays: photon time delays in ps

    Returns:
        HomCurve with one rate per delay

    Raises:
        DegenerateNormalizationError: p11_dist == 0
    """
    u = as_mat2(matrix)
    vis = visibility(u, src.v_max, src.accidentals)
    tau = np.asarray(delays, dtype=float)
    rates = 1.0 - vis * src.overlap(tau)
    return HomCurve(
        delays=tuple(float(t) for t in tau),
        rates=tuple(float(r) for r in rates),
        visibility=float(vis),
    )


def normalize_probs(
    probs: TwoPhotonProbs,
    mode: Normalization,
    reference: Optional[TwoPhotonProbs] = None,
) -> TwoPhotonProbs:
    """
    Apply a normalization convention.

    none: post-selected against the full input (unchanged)
    survivors: divided by the total probability that both photons survive
    dist_rate: each outcome divided by its distinguishable counterpart in
        ``reference``, so p11 is the coincidence rate relative to
        distinguishable photons (the HOM rate at zero delay for v_max = 1).
        Bunching outcomes can exceed 1.
    """
    mode = Normalization(mode)
    if mode is Normalization.NONE:
        return probs

    if mode is Normalization.SURVIVORS:
        if probs.total <= 0:
            raise DegenerateNormalizationError(
                f"Cannot normalize by zero survival probability ({mode.value})"
            )
        return probs.scaled(1.0 / probs.total)

    if reference is None:
        raise DomainError("dist_rate normalization needs distinguishable reference")
    ratios = {}
    for name, value in probs.as_dict().items():
        denominator = getattr(reference, name)
        if denominator <= 0:
            raise DegenerateNormalizationError(
                f"Cannot normalize {name} by a zero distinguishable rate ({mode.value})"
            )
        ratios[name] = value / denominator
    return TwoPhotonProbs(**ratios)


def _check_pattern(pattern: Sequence[int], modes: int, name: str) -> np.ndarray:
    arr = np.asarray(pattern)
    if arr.ndim != 1 or arr.shape[0] != modes:
        raise DomainError(f"{name} must list {modes} occupations, got {list(pattern)}")
    if not np.issubdtype(arr.dtype, np.integer) or np.any(arr < 0):
        raise DomainError(f"{name} must hold non-negative integers, got {list(pattern)}")
    return arr.astype(np.int64)


def n_photon_prob(
    matrix, input_pattern: Sequence[int], output_pattern: Sequence[int]
) -> float:
    """
    Post-selected probability of an n-photon Fock transition.

    |perm(U_sub)|^2 / (prod in_j! prod out_i!), where U_sub repeats column j
    of U in_j times and row i out_i times.

    Args:
        matrix: M x M subunitary matrix, M <= 8
        input_pattern: input occupation per mode
        output_pattern: output occupation per mode

    Raises:
        DomainError: shape, pattern or photon-number violations
        UnphysicalTransformError: sigma_max(U) > 1 + tol
    """
    u = np.asarray(matrix, dtype=np.complex128)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        raise DomainError(f"Mode transformation must be square, got shape {u.shape}")
    modes = u.shape[0]
    if not 1 <= modes <= MAX_MODES:
        raise DomainError(f"Mode count {modes} out of range [1, {MAX_MODES}]")
    if not np.all(np.isfinite(u)):
        raise DomainError("Mode transformation must be finite")

    occ_in = _check_pattern(input_pattern, modes, "input_pattern")
    occ_out = _check_pattern(output_pattern, modes, "output_pattern")
    n = int(occ_in.sum())
    if n != int(occ_out.sum()):
        raise DomainError(
            f"Photon number mismatch: input has {n}, output has {int(occ_out.sum())}"
        )
    if not 1 <= n <= MAX_PHOTONS:
        raise DomainError(f"Photon number {n} out of range [1, {MAX_PHOTONS}]")

    sigma_max = float(np.linalg.norm(u, 2))
    if sigma_max > 1 + PASSIVITY_TOL:
        raise UnphysicalTransformError(
            f"Transformation amplifies light: sigma_max={sigma_max:.12g}"
        )

    rows = np.repeat(np.arange(modes), occ_out)
    cols = np.repeat(np.arange(modes), occ_in)
    amplitude = permanent(u[np.ix_(rows, cols)])

    weight = math.prod(math.factorial(int(k)) for k in occ_in) * math.prod(
        math.factorial(int(k)) for k in occ_out
    )
    return abs(amplitude) ** 2 / weight
