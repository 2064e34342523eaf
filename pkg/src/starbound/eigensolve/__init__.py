"""Symmetric eigensolvers: dense Householder/QL and extremal Lanczos."""

from .dense import DENSE_LIMIT, eig_dense_symmetric, tridiagonal_eigh, tridiagonalize
from .lanczos import Which, eig_extremal_lanczos
from .spectrum import Spectrum, residual_norm

__all__ = [
    "DENSE_LIMIT",
    "Spectrum",
    "Which",
    "eig_dense_symmetric",
    "eig_extremal_lanczos",
    "residual_norm",
    "tridiagonal_eigh",
    "tridiagonalize",
]
