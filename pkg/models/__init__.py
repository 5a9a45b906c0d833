"""Lossy directional coupler models"""
from models.coupler import (
    CouplerParams,
    SystemKind,
    balanced_length,
    gamma_from_amplitude,
    hamiltonian,
    hamiltonian_bare,
    hamiltonian_sandwiched,
    propagator,
    rotation_R,
)
from models.spectrum import SpectrumPoint, eigen_spectrum

__all__ = [
    "CouplerParams",
    "SpectrumPoint",
    "SystemKind",
    "balanced_length",
    "eigen_spectrum",
    "gamma_from_amplitude",
    "hamiltonian",
    "hamiltonian_bare",
    "hamiltonian_sandwiched",
    "propagator",
    "rotation_R",
]
