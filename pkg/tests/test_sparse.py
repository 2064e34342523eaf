import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra import numpy as hnp

from starbound.errors import BadMatrix, ShapeError
from starbound.sparse import SparseSymMatrix


def random_sym(n, density, seed):
    rng = np.random.default_rng(seed)
    a = rng.standard_normal((n, n)) * (rng.random((n, n)) < density)
    return np.triu(a) + np.triu(a, 1).T


def test_canonical_form():
    m = SparseSymMatrix.from_triplets(3, [2, 0, 1, 0, 1], [0, 0, 1, 2, 1], [1.0, 5.0, 2.0, 3.0, -2.0])
    # (2,0) and (0,2) are the same entry and get summed; (1,1) cancels to zero
    assert m.rows.tolist() == [0, 0]
    assert m.cols.tolist() == [0, 2]
    assert m.vals.tolist() == [5.0, 4.0]
    assert np.all(m.rows <= m.cols)


def test_dense_roundtrip():
    a = random_sym(30, 0.2, 1)
    m = SparseSymMatrix.from_dense(a)
    assert np.array_equal(m.to_dense(), a)
    assert np.array_equal(m.diagonal(), np.diag(a))
    assert m.frobenius_norm() == pytest.approx(np.linalg.norm(a))


def test_immutable():
    m = SparseSymMatrix.from_dense(np.eye(3))
    with pytest.raises(ValueError):
        m.vals[0] = 2.0


def test_errors():
    with pytest.raises(ShapeError):
        SparseSymMatrix.from_triplets(2, [0, 2], [0, 0], [1.0, 1.0])
    with pytest.raises(ShapeError):
        SparseSymMatrix.from_triplets(2, [0], [0, 1], [1.0])
    with pytest.raises(BadMatrix):
        SparseSymMatrix.from_triplets(2, [0], [0], [np.nan])
    with pytest.raises(BadMatrix):
        SparseSymMatrix.from_dense([[0.0, 1.0], [2.0, 0.0]])
    m = SparseSymMatrix.from_dense(np.eye(3))
    with pytest.raises(ShapeError):
        m.matvec(np.ones(4))
    with pytest.raises(ShapeError):
        m.matmat(np.ones((4, 2)))


def test_shifted():
    a = random_sym(10, 0.5, 3)
    m = SparseSymMatrix.from_dense(a).shifted(-1.0, 4.0)
    assert np.allclose(m.to_dense(), 4 * np.eye(10) - a)


def test_equality():
    a = random_sym(8, 0.5, 2)
    assert SparseSymMatrix.from_dense(a) == SparseSymMatrix.from_dense(a.copy())
    assert SparseSymMatrix.from_dense(a) != SparseSymMatrix.from_dense(a + np.eye(8))


def test_empty():
    m = SparseSymMatrix.from_triplets(4, [], [], [])
    assert m.nnz == 0
    assert np.array_equal(m.matvec(np.ones(4)), np.zeros(4))
    assert np.array_equal(m.matmat(np.ones((4, 2))), np.zeros((4, 2)))


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 25), st.floats(0.05, 1.0), st.integers(0, 2**32 - 1))
def test_products_match_dense(n, density, seed):
    a = random_sym(n, density, seed)
    m = SparseSymMatrix.from_dense(a)
    rng = np.random.default_rng(seed + 1)
    x = rng.standard_normal(n)
    block = rng.standard_normal((n, 3))
    assert np.allclose(m.matvec(x), a @ x, atol=1e-12)
    assert np.allclose(m.matmat(block), a @ block, atol=1e-12)


@settings(max_examples=40, deadline=None)
@given(
    hnp.arrays(np.int64, 12, elements=st.integers(0, 5)),
    hnp.arrays(np.int64, 12, elements=st.integers(0, 5)),
    hnp.arrays(np.float64, 12, elements=st.floats(-3, 3)),
)
def test_triplets_sum_duplicates(rows, cols, vals):
    m = SparseSymMatrix.from_triplets(6, rows, cols, vals)
    oracle = np.zeros((6, 6))
    for r, c, v in zip(rows, cols, vals):
        lo, hi = min(r, c), max(r, c)
        oracle[lo, hi] += v
    oracle = oracle + np.triu(oracle, 1).T
    assert np.allclose(m.to_dense(), oracle)
    assert np.all(m.vals != 0)
    keys = m.rows * 6 + m.cols
    assert np.all(np.diff(keys) > 0)
