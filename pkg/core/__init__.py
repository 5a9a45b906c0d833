"""Dense 2x2 complex linear algebra and matrix permanents"""
from core.linalg import Spectrum2, as_mat2, eig2, expm2, svals2
from core.permanent import permanent

__all__ = ["Spectrum2", "as_mat2", "eig2", "expm2", "permanent", "svals2"]
