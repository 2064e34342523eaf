import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from starbound.eigensolve import (
    Spectrum,
    eig_dense_symmetric,
    eig_extremal_lanczos,
    residual_norm,
    tridiagonal_eigh,
    tridiagonalize,
)
from starbound.errors import BadMatrix, NoConvergence, ShapeError, TooLarge
from starbound.lattice_grid import build_star_chain_matrix, build_stem_chain_matrix
from starbound.sparse import SparseSymMatrix
from starbound.star_chain import StarChainSpec


def random_sym(n, seed, density=1.0):
    rng = np.random.default_rng(seed)
    a = rng.standard_normal((n, n)) * (rng.random((n, n)) < density)
    return SparseSymMatrix.from_dense(np.triu(a) + np.triu(a, 1).T)


def subspace_projector(vectors):
    return vectors @ vectors.T


class TestDense:
    def test_diagonal(self):
        s = eig_dense_symmetric(SparseSymMatrix.from_dense(np.diag([3.0, 1.0, 2.0])))
        assert s.eigenvalues.tolist() == [1.0, 2.0, 3.0]
        assert np.allclose(np.abs(s.eigenvectors), np.eye(3)[:, [1, 2, 0]])

    def test_path(self):
        s = eig_dense_symmetric(build_star_chain_matrix(StarChainSpec(2, 2)))
        r3 = math.sqrt(3)
        assert s.eigenvalues == pytest.approx([-r3, -1, 0, 1, r3], abs=1e-13)

    def test_ten_arm_extremes(self):
        s = eig_dense_symmetric(build_star_chain_matrix(StarChainSpec(10, 20)))
        assert s.eigenvalues[0] == pytest.approx(-3.33, abs=5e-3)
        assert s.eigenvalues[-1] == pytest.approx(3.33, abs=5e-3)

    def test_multiplicity_kept(self):
        s = eig_dense_symmetric(build_star_chain_matrix(StarChainSpec(3, 1)))
        assert len(s) == 4
        assert s.eigenvalues[1:3] == pytest.approx([0, 0], abs=1e-14)

    def test_degenerate_cluster_orthonormal(self):
        # p = 10 arms give 9-fold exactly degenerate levels
        s = eig_dense_symmetric(build_star_chain_matrix(StarChainSpec(10, 6)))
        v = s.eigenvectors
        assert np.abs(v.T @ v - np.eye(len(s))).max() < 1e-9
        assert s.converged

    def test_invariant_subspace_matches_oracle(self):
        m = build_star_chain_matrix(StarChainSpec(6, 4))
        s = eig_dense_symmetric(m)
        w, u = np.linalg.eigh(m.to_dense())
        level = 2 * math.cos(math.pi / 5)
        mine = s.eigenvectors[:, np.abs(s.eigenvalues - level) < 1e-8]
        ref = u[:, np.abs(w - level) < 1e-8]
        assert mine.shape[1] == ref.shape[1] == 5
        assert np.abs(subspace_projector(mine) - subspace_projector(ref)).max() < 1e-9

    def test_values_only(self):
        m = random_sym(40, 5)
        full = eig_dense_symmetric(m)
        vals = eig_dense_symmetric(m, want_vectors=False)
        assert vals.eigenvectors is None
        assert vals.eigenvalues == pytest.approx(full.eigenvalues, abs=1e-12)

    def test_sign_convention(self):
        s = eig_dense_symmetric(random_sym(20, 9))
        pivot = np.argmax(np.abs(s.eigenvectors), axis=0)
        assert np.all(s.eigenvectors[pivot, np.arange(20)] > 0)

    def test_too_large(self):
        with pytest.raises(TooLarge):
            eig_dense_symmetric(random_sym(20, 1), dense_limit=10)

    def test_bad_matrix(self):
        with pytest.raises(BadMatrix):
            SparseSymMatrix.from_triplets(2, [0], [1], [np.inf])

    def test_empty(self):
        s = eig_dense_symmetric(SparseSymMatrix.from_triplets(0, [], [], []))
        assert len(s) == 0

    def test_tridiagonalize(self):
        a = random_sym(30, 4).to_dense()
        d, e, q = tridiagonalize(a)
        t = np.diag(d) + np.diag(e, 1) + np.diag(e, -1)
        assert np.abs(q.T @ a @ q - t).max() < 1e-12
        assert np.abs(q.T @ q - np.eye(30)).max() < 1e-13

    def test_ql_cap(self):
        d = np.arange(10.0)
        e = np.ones(9)
        with pytest.raises(NoConvergence):
            tridiagonal_eigh(d, e, max_sweeps=0)

    @settings(max_examples=30, deadline=None)
    @given(st.integers(1, 60), st.integers(0, 2**32 - 1), st.floats(0.05, 1.0))
    def test_reconstruction_and_oracle(self, n, seed, density):
        m = random_sym(n, seed, density)
        s = eig_dense_symmetric(m)
        a = m.to_dense()
        v, lam = s.eigenvectors, s.eigenvalues
        scale = max(np.linalg.norm(a), 1e-300)
        assert np.linalg.norm(a - (v * lam) @ v.T) <= 1e-9 * max(scale, 1.0)
        assert np.abs(v.T @ v - np.eye(n)).max() <= 1e-9
        assert np.all(np.diff(lam) >= 0)
        assert lam == pytest.approx(np.linalg.eigvalsh(a), abs=1e-10 * max(scale, 1.0))
        assert s.converged


class TestLanczos:
    def test_random_sparse_matches_dense(self):
        m = random_sym(300, 11, density=0.03)
        dense = eig_dense_symmetric(m).eigenvalues
        s = eig_extremal_lanczos(m, count=3, which="both")
        assert s.eigenvalues == pytest.approx(np.r_[dense[:3], dense[-3:]], abs=1e-9)
        assert np.all(s.residuals <= 1e-10)

    def test_star_p4(self):
        m = build_star_chain_matrix(StarChainSpec(4, 200))
        s = eig_extremal_lanczos(m, count=1, which="both")
        e = 4 / math.sqrt(3)
        assert s.eigenvalues == pytest.approx([-e, e], abs=1e-8)
        assert s.method == "lanczos"

    @pytest.mark.parametrize("which", ["lowest", "highest"])
    def test_one_end(self, which):
        m = build_stem_chain_matrix(80)
        s = eig_extremal_lanczos(m, count=2, which=which)
        dense = eig_dense_symmetric(m).eigenvalues
        ref = dense[:2] if which == "lowest" else dense[-2:]
        assert s.eigenvalues == pytest.approx(ref, abs=1e-9)

    def test_dense_fallback(self):
        m = random_sym(6, 2)
        s = eig_extremal_lanczos(m, count=3)
        assert s.method == "dense"
        assert s.eigenvalues == pytest.approx(eig_dense_symmetric(m).eigenvalues)

    def test_determinism(self):
        m = build_star_chain_matrix(StarChainSpec(5, 150))
        a = eig_extremal_lanczos(m, count=2, seed=42)
        b = eig_extremal_lanczos(m, count=2, seed=42)
        assert a.eigenvalues.tobytes() == b.eigenvalues.tobytes()
        assert a.eigenvectors.tobytes() == b.eigenvectors.tobytes()

    def test_no_convergence(self):
        m = random_sym(400, 3, density=0.05)
        with pytest.raises(NoConvergence) as info:
            eig_extremal_lanczos(m, count=4, max_iter=10)
        assert info.value.best_residual > 0

    def test_count(self):
        with pytest.raises(ValueError):
            eig_extremal_lanczos(random_sym(10, 1), count=0)


class TestResidual:
    def test_exact_pair(self):
        m = SparseSymMatrix.from_dense(np.diag([1.0, 2.0]))
        assert residual_norm(m, 2.0, [0.0, 1.0]) == 0.0

    def test_perturbed(self):
        m = SparseSymMatrix.from_dense(np.diag([1.0, 2.0, 3.0]))
        for eps in (1e-3, 1e-6):
            r = residual_norm(m, 2.0, np.array([eps, 1.0, 0.0]))
            assert r == pytest.approx(eps, rel=1e-6)

    def test_claw(self):
        m = build_star_chain_matrix(StarChainSpec(3, 1))
        r3 = math.sqrt(3)
        v = np.array([r3, 1, 1, 1]) / math.sqrt(6)
        assert residual_norm(m, r3, v) <= 1e-12

    def test_shape(self):
        with pytest.raises(ShapeError):
            residual_norm(SparseSymMatrix.from_dense(np.eye(2)), 1.0, np.ones(3))


def test_spectrum_metadata():
    s = Spectrum(np.array([1.0]), None, np.array([1e-12]), 1e-10, "dense")
    meta = s.metadata()
    assert meta["converged"] and meta["count"] == 1 and meta["method"] == "dense"
