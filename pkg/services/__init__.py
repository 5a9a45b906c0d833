"""Photon statistics, figure pipelines and table output"""
from services.fock_evolution import (
    HomCurve,
    Normalization,
    SourceModel,
    TwoPhotonProbs,
    hom_curve,
    interference_term,
    n_photon_prob,
    normalize_probs,
    two_photon_probs_dist,
    two_photon_probs_indist,
    visibility,
)

__all__ = [
    "HomCurve",
    "Normalization",
    "SourceModel",
    "TwoPhotonProbs",
    "hom_curve",
    "interference_term",
    "n_photon_prob",
    "normalize_probs",
    "two_photon_probs_dist",
    "two_photon_probs_indist",
    "visibility",
]
