"""Full symmetric eigendecomposition: Householder reduction then implicit QL."""

from __future__ import annotations

import numpy as np

from ..errors import BadMatrix, NoConvergence, TooLarge
from ..sparse import SparseSymMatrix
from . import _kernels
from .spectrum import Spectrum

DENSE_LIMIT = 4096
QL_MAX_SWEEPS = 30
CLUSTER_GAP = 1e-8
RESIDUAL_FACTOR = 1e-10


def tridiagonalize(a: np.ndarray, want_q: bool = True):
    """Reduce symmetric ``a`` to tridiagonal ``T = Q^T a Q``.

    Returns ``(d, e, Q)`` with the diagonal, the off-diagonal and the
    accumulated orthogonal factor (``None`` when ``want_q`` is false).
    ``a`` is not modified.
    """
    a = np.array(a, dtype=float, order="C", copy=True)
    n = a.shape[0]
    reflectors = []
    for k in range(n - 2):
        x = a[k + 1 :, k]
        alpha = np.sqrt(x @ x)
        if alpha == 0.0:
            reflectors.append(None)
            continue
        if x[0] > 0:
            alpha = -alpha
        u = x.copy()
        u[0] -= alpha
        h = 0.5 * (u @ u)
        if h == 0.0:
            reflectors.append(None)
            continue
        p = a[k + 1 :, k + 1 :] @ u / h
        w = p - ((u @ p) / (2.0 * h)) * u
        _kernels.rank2_update(a, k + 1, u, w)
        a[k + 1, k] = a[k, k + 1] = alpha
        a[k + 2 :, k] = 0.0
        a[k, k + 2 :] = 0.0
        reflectors.append((u, h))
    d = np.diag(a).copy()
    e = np.diag(a, 1).copy()
    if not want_q:
        return d, e, None
    q = np.eye(n)
    for k in range(n - 3, -1, -1):
        if reflectors[k] is None:
            continue
        u, h = reflectors[k]
        t = (u @ q[k + 1 :, k + 1 :]) / h
        _kernels.rank1_update(q, k + 1, u, t)
    return d, e, q


def tridiagonal_eigh(d, e, zt=None, max_sweeps: int = QL_MAX_SWEEPS):
    """Eigenvalues of the tridiagonal ``(d, e)``, rotating the rows of ``zt``.

    Returns ``(values, zt)`` unsorted, in the order QL leaves them.
    """
    d = np.array(d, dtype=float)
    e = np.array(e, dtype=float)
    if zt is None:
        zt = np.zeros((len(d), 0))
    status = _kernels.implicit_ql(d, e, zt, max_sweeps)
    if status >= 0:
        raise NoConvergence(f"QL iteration did not converge for eigenvalue {status}")
    return d, zt


def _orthonormalize_clusters(values: np.ndarray, vectors: np.ndarray, gap: float) -> None:
    start = 0
    n = len(values)
    while start < n:
        stop = start + 1
        while stop < n and values[stop] - values[stop - 1] < gap:
            stop += 1
        if stop - start > 1:
            block = vectors[:, start:stop]
            for _ in range(2):
                for j in range(block.shape[1]):
                    for i in range(j):
                        block[:, j] -= (block[:, i] @ block[:, j]) * block[:, i]
                    block[:, j] /= np.sqrt(block[:, j] @ block[:, j])
        start = stop


def eig_dense_symmetric(
    matrix: SparseSymMatrix,
    want_vectors: bool = True,
    dense_limit: int = DENSE_LIMIT,
) -> Spectrum:
    """Complete spectrum of a symmetric matrix.

    Parameters
    ----------
    matrix : SparseSymMatrix
        Matrix to diagonalize; expanded to dense storage internally.
    want_vectors : bool
        Also return orthonormal eigenvectors and per-pair residual norms.
    dense_limit : int
        Largest dimension accepted.

    Returns
    -------
    Spectrum
        Every eigenvalue with its multiplicity, ascending. Eigenvectors inside
        a cluster closer than ``1e-8`` are re-orthonormalized, so only the
        cluster's invariant subspace is meaningful. Residuals are checked
        against ``1e-10 * ||H||_F``.

    Raises
    ------
    TooLarge
        If ``matrix.dim > dense_limit``.
    BadMatrix
        If an entry is not finite.
    """
    if matrix.dim > dense_limit:
        raise TooLarge(f"dimension {matrix.dim} exceeds the dense limit {dense_limit}")
    if not np.all(np.isfinite(matrix.vals)):
        raise BadMatrix("matrix has non-finite entries")
    a = matrix.to_dense()
    n = matrix.dim
    tol = RESIDUAL_FACTOR * max(matrix.frobenius_norm(), 1.0)
    if n == 0:
        return Spectrum(np.zeros(0), np.zeros((0, 0)) if want_vectors else None, np.zeros(0), tol, "dense")
    d, e, q = tridiagonalize(a, want_q=want_vectors)
    zt = np.ascontiguousarray(q.T) if want_vectors else None
    values, zt = tridiagonal_eigh(d, e, zt)
    order = np.argsort(values, kind="stable")
    values = values[order]
    if not want_vectors:
        return Spectrum(values, None, np.zeros(0), tol, "dense")
    vectors = np.ascontiguousarray(zt[order].T)
    _orthonormalize_clusters(values, vectors, CLUSTER_GAP)
    # fix the sign so the largest-magnitude component is positive
    pivot = np.argmax(np.abs(vectors), axis=0)
    signs = np.sign(vectors[pivot, np.arange(n)])
    signs[signs == 0] = 1.0
    vectors *= signs
    residuals = np.linalg.norm(a @ vectors - vectors * values, axis=0)
    return Spectrum(values, vectors, residuals, tol, "dense")
