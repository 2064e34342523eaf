"""Compiled inner loops for the dense symmetric eigensolver."""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True)
def rank2_update(a, k, u, w):
    """``a[k:, k:] -= u w^T + w u^T`` in place."""
    m = u.shape[0]
    for i in range(m):
        ui = u[i]
        wi = w[i]
        row = a[k + i]
        for j in range(m):
            row[k + j] -= ui * w[j] + wi * u[j]


@njit(cache=True)
def rank1_update(q, k, u, t):
    """``q[k:, k:] -= u t^T`` in place."""
    m = u.shape[0]
    for i in range(m):
        ui = u[i]
        row = q[k + i]
        for j in range(m):
            row[k + j] -= ui * t[j]


@njit(cache=True)
def implicit_ql(d, e, zt, max_iter):
    """Diagonalize a symmetric tridiagonal matrix by implicit-shift QL.

    ``d`` (diagonal) is overwritten with eigenvalues, ``e`` holds the
    ``n - 1`` off-diagonal entries and is destroyed. Each plane rotation is
    applied to rows ``i, i+1`` of ``zt``, so if ``zt`` starts as ``Q^T`` its
    row ``j`` ends up as the eigenvector of ``d[j]``. Any number of columns
    may be carried, including none.

    Returns ``-1`` on success, otherwise the index of the eigenvalue that
    failed to converge within ``max_iter`` sweeps.
    """
    n = d.shape[0]
    ee = np.zeros(n)
    for i in range(n - 1):
        ee[i] = e[i]
    eps = np.finfo(np.float64).eps
    ncol = zt.shape[1]
    for l in range(n):
        it = 0
        while True:
            m = l
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(ee[m]) <= eps * dd:
                    break
                m += 1
            if m == l:
                break
            if it == max_iter:
                return l
            it += 1
            # Wilkinson shift from the leading 2x2 block
            g = (d[l + 1] - d[l]) / (2.0 * ee[l])
            r = np.hypot(g, 1.0)
            g = d[m] - d[l] + ee[l] / (g + (r if g >= 0.0 else -r))
            s = 1.0
            c = 1.0
            p = 0.0
            i = m - 1
            deflated = False
            while i >= l:
                f = s * ee[i]
                b = c * ee[i]
                r = np.hypot(f, g)
                ee[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    ee[m] = 0.0
                    deflated = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                zi = zt[i]
                zj = zt[i + 1]
                for k in range(ncol):
                    f2 = zj[k]
                    zj[k] = s * zi[k] + c * f2
                    zi[k] = c * zi[k] - s * f2
                i -= 1
            if deflated:
                continue
            d[l] -= p
            ee[l] = g
            ee[m] = 0.0
    return -1
