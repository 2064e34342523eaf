from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import ShapeError
from ..sparse import SparseSymMatrix


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Eigenvalues in ascending order, optionally with eigenvectors.

    ``eigenvectors[:, j]`` belongs to ``eigenvalues[j]``. ``residuals[j]`` is
    ``||H v - lambda v||`` for that pair (empty when no vectors were asked
    for) and ``tolerance`` the bound it was checked against.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray | None = None
    residuals: np.ndarray = field(default_factory=lambda: np.zeros(0))
    tolerance: float = float("inf")
    method: str = ""
    iterations: int = 0
    seed: int | None = None

    def __len__(self) -> int:
        return len(self.eigenvalues)

    @property
    def has_vectors(self) -> bool:
        return self.eigenvectors is not None

    @property
    def converged(self) -> bool:
        return bool(np.all(self.residuals <= self.tolerance))

    def metadata(self) -> dict:
        return {
            "method": self.method,
            "count": int(len(self.eigenvalues)),
            "iterations": int(self.iterations),
            "seed": self.seed,
            "tolerance": float(self.tolerance),
            "max_residual": float(self.residuals.max()) if len(self.residuals) else 0.0,
            "converged": self.converged,
        }


def residual_norm(matrix: SparseSymMatrix, eigenvalue: float, eigenvector) -> float:
    """``||H v - lambda v|| / max(1, ||v||)``."""
    v = np.asarray(eigenvector, dtype=float)
    if v.shape != (matrix.dim,):
        raise ShapeError(f"vector of shape {v.shape} does not match dimension {matrix.dim}")
    r = matrix.matvec(v) - eigenvalue * v
    return float(np.linalg.norm(r) / max(1.0, np.linalg.norm(v)))
