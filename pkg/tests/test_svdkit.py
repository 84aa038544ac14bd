import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from revorder.errors import BlockShapeMismatch, NotOrthonormal, NotUnitary
from revorder.matcore import COMPLEX, REAL, adjoint, fro_norm
from revorder.rolkit import random_rank_matrix
from revorder.subgeo import Subspace, null_basis, subspace_eq
from revorder.svdkit import (
    SpectralBlocks,
    SvdFactors,
    complete_orthonormal,
    compute_svd,
    group_spectrum,
    random_reparametrization,
    random_unitary,
    reparametrize_svd,
    svdvals,
)


def _unitary_err(Q):
    return fro_norm(adjoint(Q) @ Q - np.eye(Q.shape[1]))


def _check_factors(A, s, tol=1e-12):
    m, n = A.shape
    assert s.U.shape == (m, m) and s.V.shape == (n, n)
    assert _unitary_err(s.U) <= tol * max(1, m)
    assert _unitary_err(s.V) <= tol * max(1, n)
    assert np.all(s.sigma > 0) and np.all(np.diff(s.sigma) <= 0)
    assert fro_norm(s.reconstruct() - A) <= 1e-11 * (1 + fro_norm(A))


class TestComputeSvd:
    def test_zero_matrix(self):
        s = compute_svd(np.zeros((3, 2)))
        assert s.rank == 0 and s.sigma.size == 0
        assert np.array_equal(s.U, np.eye(3)) and np.array_equal(s.V, np.eye(2))

    def test_identity(self):
        s = compute_svd(np.eye(4))
        assert np.allclose(s.sigma, 1.0)
        # I = U I V* forces U = V
        assert fro_norm(s.U - s.V) <= 1e-14

    def test_diagonal_pattern(self):
        A = np.array([[1.0, 0, 0, 0], [0, 2, 0, 0], [0, 0, 1, 0]])
        s = compute_svd(A)
        assert np.allclose(s.sigma, [2, 1, 1])
        _check_factors(A, s)

    def test_sigma_matrix_and_dict(self):
        A = np.array([[3.0, 0], [0, -2], [0, 0]])
        s = compute_svd(A)
        assert np.allclose(s.sigma_matrix(), [[3, 0], [0, 2], [0, 0]])
        d = s.to_dict()
        assert d["rank"] == 2 and d["sigma"] == [3.0, 2.0]

    @pytest.mark.parametrize("shape", [(7, 4), (4, 7), (5, 5), (1, 6), (6, 1)])
    @pytest.mark.parametrize("field", [REAL, COMPLEX])
    def test_random_full_rank(self, shape, field):
        rng = np.random.default_rng(11)
        A = rng.standard_normal(shape)
        if field == COMPLEX:
            A = A + 1j * rng.standard_normal(shape)
        s = compute_svd(A)
        assert s.rank == min(shape)
        _check_factors(A, s)
        assert np.allclose(s.sigma, np.linalg.svd(A, compute_uv=False), rtol=1e-12)

    def test_phase_convention(self):
        rng = np.random.default_rng(5)
        A = rng.standard_normal((5, 4)) + 1j * rng.standard_normal((5, 4))
        V = compute_svd(A).V
        for j in range(V.shape[1]):
            col = V[:, j]
            z = col[np.flatnonzero(np.abs(col) > 1e-12)[0]]
            assert abs(z.imag) <= 1e-14 and z.real > 0

    def test_rank_tol_and_scale(self):
        A = np.diag([1.0, 1e-9])
        assert compute_svd(A).rank == 2
        assert compute_svd(A, rank_tol=1e-6).rank == 1
        # a tiny matrix judged against an external magnitude is noise
        assert compute_svd(1e-20 * np.eye(2), rank_tol=1e-10, scale=1.0).rank == 0

    def test_svdvals_includes_zeros(self):
        assert np.allclose(svdvals(np.array([[1.0, 1.0], [1.0, 1.0]])), [2.0, 0.0], atol=1e-15)
        assert svdvals(np.zeros((0, 3))).size == 0


@settings(max_examples=80, deadline=None)
@given(
    m=st.integers(1, 9),
    n=st.integers(1, 9),
    data=st.data(),
    seed=st.integers(0, 2**32 - 1),
    cplx=st.booleans(),
)
def test_svd_properties(m, n, data, seed, cplx):
    r = data.draw(st.integers(0, min(m, n)))
    f = COMPLEX if cplx else REAL
    A = random_rank_matrix(m, n, r, seed, f)
    s = compute_svd(A)
    assert s.rank == r
    _check_factors(A, s)
    for i in range(r):
        assert np.linalg.norm(A @ s.V[:, i] - s.sigma[i] * s.U[:, i]) <= 1e-10 * s.sigma[0]
    # trailing columns span null(A) and null(A*)
    assert subspace_eq(Subspace(s.V[:, r:]), null_basis(A))
    assert subspace_eq(Subspace(s.U[:, r:]), null_basis(adjoint(A)))


class TestGroupSpectrum:
    def _svd(self, sigma, shape=None):
        r = len(sigma)
        m, n = shape or (r, r)
        return SvdFactors(U=np.eye(m), sigma=np.array(sigma, float), V=np.eye(n))

    def test_distinct(self):
        b = group_spectrum(self._svd([3, 2, 1]), 1e-8)
        assert b.blocks == ((0, 1), (1, 2), (2, 3))

    def test_tie(self):
        assert group_spectrum(self._svd([2, 2, 1])).blocks == ((0, 2), (2, 3))

    def test_below_gap(self):
        assert group_spectrum(self._svd([1, 1 - 1e-13]), 1e-8).blocks == ((0, 2),)

    def test_null_dims(self):
        b = group_spectrum(self._svd([1.0], (4, 3)))
        assert (b.null_dim_right, b.null_dim_left) == (2, 3)
        assert b.sizes() == [1]


class TestReparametrize:
    def test_identity_unitaries(self):
        A = random_rank_matrix(5, 4, 3, 0)
        s = compute_svd(A)
        b = group_spectrum(s)
        t = reparametrize_svd(s, b, [np.eye(k) for k in b.sizes()], np.eye(1), np.eye(2))
        assert fro_norm(t.U - s.U) <= 1e-13 and fro_norm(t.V - s.V) <= 1e-15

    def test_identity_matrix_gives_QIQ(self):
        s = compute_svd(np.eye(2))
        Q = random_unitary(2, np.random.default_rng(3), COMPLEX)
        b = group_spectrum(s)
        t = reparametrize_svd(s, b, [adjoint(s.V) @ Q], np.eye(0), np.eye(0))
        assert fro_norm(t.V - Q) <= 1e-14 and fro_norm(t.U - Q) <= 1e-14

    def test_repeated_sigma_block(self):
        rng = np.random.default_rng(8)
        A = random_rank_matrix(6, 4, 4, rng, sigma=[3.0, 2.0, 2.0, 1.0])
        s = compute_svd(A)
        b = group_spectrum(s)
        assert b.sizes() == [1, 2, 1]
        t = random_reparametrization(s, rng)
        assert fro_norm(t.reconstruct() - A) <= 1e-11 * fro_norm(A)
        assert np.array_equal(t.sigma, s.sigma)
        # inside the repeated block the vectors differ by more than a phase
        overlap = np.abs(adjoint(s.V[:, 1:3]) @ t.V[:, 1:3])
        assert np.max(np.abs(overlap - np.eye(2))) > 1e-3

    def test_errors(self):
        s = compute_svd(np.diag([2.0, 1.0, 0.0]))
        b = group_spectrum(s)
        with pytest.raises(BlockShapeMismatch):
            reparametrize_svd(s, b, [np.eye(1)], np.eye(1), np.eye(1))
        with pytest.raises(BlockShapeMismatch):
            reparametrize_svd(s, b, [np.eye(2), np.eye(1)], np.eye(1), np.eye(1))
        with pytest.raises(NotUnitary):
            reparametrize_svd(s, b, [2 * np.eye(1), np.eye(1)], np.eye(1), np.eye(1))
        with pytest.raises(BlockShapeMismatch):
            bad = SpectralBlocks(blocks=((0, 2),), null_dim_right=2, null_dim_left=1)
            reparametrize_svd(s, bad, [np.eye(2)], np.eye(1), np.eye(1))


class TestRandomUnitary:
    def test_scalar(self):
        q = random_unitary(1, np.random.default_rng(0))
        assert q.shape == (1, 1) and abs(abs(q[0, 0]) - 1) < 1e-15

    @pytest.mark.parametrize("field", [REAL, COMPLEX])
    def test_unitary(self, field):
        Q = random_unitary(5, np.random.default_rng(1), field)
        assert _unitary_err(Q) <= 1e-12

    def test_deterministic(self):
        assert np.array_equal(random_unitary(5, 42), random_unitary(5, 42))

    def test_haar_mean_trace(self):
        # E tr(Q) = 0 and E |tr Q|^2 = 1 for Haar unitaries
        rng = np.random.default_rng(2)
        tr = np.array([np.trace(random_unitary(4, rng, COMPLEX)) for _ in range(4000)])
        assert abs(tr.mean()) < 0.06
        assert abs(np.mean(np.abs(tr) ** 2) - 1.0) < 0.1


class TestCompleteOrthonormal:
    def test_e1(self):
        N = complete_orthonormal(np.eye(3)[:, :1])
        assert subspace_eq(Subspace(N), Subspace(np.eye(3)[:, 1:]))

    def test_full(self):
        assert complete_orthonormal(np.eye(3)).shape == (3, 0)

    def test_random(self):
        M = random_unitary(7, np.random.default_rng(4))[:, :3]
        N = complete_orthonormal(M)
        assert fro_norm(adjoint(M) @ N) <= 1e-12
        assert _unitary_err(N) <= 1e-12

    def test_rejects_non_orthonormal(self):
        with pytest.raises(NotOrthonormal):
            complete_orthonormal(np.ones((3, 1)))
