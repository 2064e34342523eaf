"""Symmetric sparse matrices stored as a sorted upper-triangle triplet list."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import BadMatrix, ShapeError


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class SparseSymMatrix:
    """Real symmetric matrix holding only entries with ``row <= col``.

    Entries are sorted by ``(row, col)``, duplicates are summed and exact
    zeros dropped. The lower triangle is implied by symmetry. Instances are
    immutable; build them with :meth:`from_triplets`.
    """

    dim: int
    rows: np.ndarray
    cols: np.ndarray
    vals: np.ndarray
    _full: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.dim < 0:
            raise ShapeError("dimension must be non-negative")
        if not (len(self.rows) == len(self.cols) == len(self.vals)):
            raise ShapeError("triplet arrays differ in length")
        if not np.all(np.isfinite(self.vals)):
            raise BadMatrix("matrix has non-finite entries")
        # expanded (both triangles) coordinate form for products
        off = self.rows != self.cols
        r = np.concatenate([self.rows, self.cols[off]])
        c = np.concatenate([self.cols, self.rows[off]])
        v = np.concatenate([self.vals, self.vals[off]])
        order = np.lexsort((c, r))
        object.__setattr__(self, "_full", (r[order], c[order], v[order]))

    @classmethod
    def from_triplets(cls, dim: int, rows, cols, vals) -> "SparseSymMatrix":
        """Canonicalize arbitrary triplets.

        A pair given in both triangles is summed like any other duplicate, so
        pass each off-diagonal coupling once.
        """
        rows = np.asarray(rows, dtype=np.int64).ravel()
        cols = np.asarray(cols, dtype=np.int64).ravel()
        vals = np.asarray(vals, dtype=float).ravel()
        if not (len(rows) == len(cols) == len(vals)):
            raise ShapeError("triplet arrays differ in length")
        if len(rows) and (min(rows.min(), cols.min()) < 0 or max(rows.max(), cols.max()) >= dim):
            raise ShapeError(f"index out of range for dimension {dim}")
        if not np.all(np.isfinite(vals)):
            raise BadMatrix("matrix has non-finite entries")
        lo = np.minimum(rows, cols)
        hi = np.maximum(rows, cols)
        if len(lo):
            key = lo * dim + hi
            uniq, inverse = np.unique(key, return_inverse=True)
            summed = np.zeros(len(uniq))
            np.add.at(summed, inverse, vals)
            keep = summed != 0.0
            uniq, summed = uniq[keep], summed[keep]
            lo, hi = uniq // dim, uniq % dim
        else:
            summed = vals
        return cls(int(dim), _frozen(lo), _frozen(hi), _frozen(summed))

    @classmethod
    def from_dense(cls, a) -> "SparseSymMatrix":
        a = np.asarray(a, dtype=float)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ShapeError("expected a square matrix")
        if not np.all(np.isfinite(a)):
            raise BadMatrix("matrix has non-finite entries")
        if not np.array_equal(a, a.T):
            raise BadMatrix("matrix is not symmetric")
        r, c = np.nonzero(np.triu(a))
        return cls.from_triplets(a.shape[0], r, c, a[r, c])

    @property
    def nnz(self) -> int:
        """Stored (upper-triangle) entry count."""
        return len(self.vals)

    def to_dense(self) -> np.ndarray:
        a = np.zeros((self.dim, self.dim))
        r, c, v = self._full
        a[r, c] = v
        return a

    def diagonal(self) -> np.ndarray:
        d = np.zeros(self.dim)
        on = self.rows == self.cols
        d[self.rows[on]] = self.vals[on]
        return d

    def matvec(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.shape != (self.dim,):
            raise ShapeError(f"vector of shape {x.shape} does not match dimension {self.dim}")
        r, c, v = self._full
        return np.bincount(r, weights=v * x[c], minlength=self.dim)

    def matmat(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.ndim != 2 or x.shape[0] != self.dim:
            raise ShapeError(f"block of shape {x.shape} does not match dimension {self.dim}")
        r, c, v = self._full
        out = np.zeros_like(x)
        if len(r):
            starts = np.flatnonzero(np.r_[True, r[1:] != r[:-1]])
            out[r[starts]] = np.add.reduceat(v[:, None] * x[c], starts, axis=0)
        return out

    def frobenius_norm(self) -> float:
        r, c, v = self._full
        return float(np.sqrt(np.sum(v * v)))

    def shifted(self, scale: float, shift: float) -> "SparseSymMatrix":
        """Return ``scale * self + shift * I``."""
        n = self.dim
        idx = np.arange(n)
        return SparseSymMatrix.from_triplets(
            n,
            np.concatenate([self.rows, idx]),
            np.concatenate([self.cols, idx]),
            np.concatenate([scale * self.vals, np.full(n, float(shift))]),
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, SparseSymMatrix):
            return NotImplemented
        return (
            self.dim == other.dim
            and np.array_equal(self.rows, other.rows)
            and np.array_equal(self.cols, other.cols)
            and np.array_equal(self.vals, other.vals)
        )

    __hash__ = None
