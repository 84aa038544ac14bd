"""Singular value decomposition by one-sided Jacobi, spectral blocks, and SVD reparametrization.

The decomposition follows the constructive route: orthogonalize the columns of
A (or of A* when A is wide) by plane rotations, read the right singular vectors
off the accumulated rotations, and set ``u_i = A v_i / sigma_i``. Because an SVD
is only unique up to unitary changes of basis inside each group of equal
singular values (and inside the two null spaces), `reparametrize_svd` applies
such a change and returns another valid factorization of the same matrix.
"""
from dataclasses import dataclass

import numpy as np

from . import _accel
from .errors import BlockShapeMismatch, NotOrthonormal, NotUnitary
from .matcore import COMPLEX, REAL, adjoint, as_matrix, matrix_to_dict

EPS = np.finfo(np.float64).eps
DEFAULT_GAP_TOL = 1e-8
MAX_SWEEPS = 80


@dataclass(frozen=True)
class SvdFactors:
    """Full SVD ``A = U diag(sigma, shape) V*`` with only the positive sigmas stored."""

    U: np.ndarray
    sigma: np.ndarray
    V: np.ndarray

    @property
    def rank(self):
        return len(self.sigma)

    @property
    def shape(self):
        return (self.U.shape[0], self.V.shape[0])

    def sigma_matrix(self):
        m, n = self.shape
        S = np.zeros((m, n))
        r = self.rank
        S[:r, :r] = np.diag(self.sigma)
        return S

    def reconstruct(self):
        r = self.rank
        m, n = self.shape
        if r == 0:
            dtype = np.result_type(self.U, self.V)
            return np.zeros((m, n), dtype=dtype)
        return (self.U[:, :r] * self.sigma) @ adjoint(self.V[:, :r])

    def to_dict(self):
        return {
            "U": matrix_to_dict(self.U),
            "sigma": [float(s) for s in self.sigma],
            "V": matrix_to_dict(self.V),
            "rank": self.rank,
        }


@dataclass(frozen=True)
class SpectralBlocks:
    """Index ranges ``[start, stop)`` over 0..r-1 grouping equal singular values."""

    blocks: tuple
    null_dim_right: int
    null_dim_left: int

    def sizes(self):
        return [stop - start for start, stop in self.blocks]


def default_rank_tol(shape):
    return max(shape) * EPS


def _jacobi(G):
    m, n = G.shape
    W = np.eye(n, dtype=G.dtype)
    _accel.jacobi_sweeps(G, W, max(m, n) * EPS, MAX_SWEEPS)
    sig = np.sqrt(np.sum(np.abs(G) ** 2, axis=0))
    order = np.argsort(-sig, kind="stable")
    return G[:, order], sig[order], W[:, order]


def _first_entry_phases(X, floor=1e-12):
    """Unit scalars making the first entry above `floor` of each column real positive."""
    mask = np.abs(X) > floor
    first = np.argmax(mask, axis=0)
    z = X[first, np.arange(X.shape[1])]
    az = np.abs(z)
    ph = np.ones(X.shape[1], dtype=X.dtype)
    hit = mask.any(axis=0)
    ph[hit] = np.conj(z[hit]) / az[hit]
    return ph


def svdvals(A):
    """All min(m, n) singular values of `A` in non-increasing order, zeros included."""
    A = as_matrix(A)
    m, n = A.shape
    if m == 0 or n == 0:
        return np.zeros(0)
    G = A.copy() if m >= n else adjoint(A).copy()
    _, sig, _ = _jacobi(G)
    return sig


def compute_svd(A, rank_tol=None, scale=None):
    """Full SVD of `A` by one-sided Jacobi.

    Parameters
    ----------
    A : array_like
        Nonempty real or complex matrix.
    rank_tol : float, optional
        Relative threshold; singular values ``<= rank_tol * max(sigma_max, scale)``
        count as zero. Defaults to ``max(m, n) * eps``.
    scale : float, optional
        External magnitude reference, for matrices formed as products whose
        entries may be pure rounding noise.

    Returns
    -------
    SvdFactors
        Square unitary U (m x m) and V (n x n). The right singular vectors are
        normalized so that their first entry above 1e-12 in magnitude is real
        and positive, and ``u_i = A v_i / sigma_i``. Trailing columns of V and U
        span null(A) and null(A*).
    """
    A = as_matrix(A)
    m, n = A.shape
    if rank_tol is None:
        rank_tol = default_rank_tol(A.shape)
    tall = m >= n
    G = A.copy() if tall else adjoint(A).copy()
    G, sig, W = _jacobi(G)
    ref = max(sig[0] if sig.size else 0.0, scale or 0.0)
    r = int(np.count_nonzero(sig > rank_tol * ref)) if ref > 0 else 0
    sigma = sig[:r].copy()
    if tall:
        V = W
        ph = _first_entry_phases(V)
        V = V * ph
        Ur = G[:, :r] * ph[:r] / sigma
        U = np.hstack([Ur, complete_orthonormal(Ur, check=False)])
    else:
        Vr = G[:, :r] / sigma
        ph = _first_entry_phases(Vr)
        Vr = Vr * ph
        U = W.copy()
        U[:, :r] = U[:, :r] * ph
        V = np.hstack([Vr, complete_orthonormal(Vr, check=False)])
    return SvdFactors(U=U, sigma=sigma, V=V)


def group_spectrum(svd, gap_tol=DEFAULT_GAP_TOL):
    """Group consecutive singular values that differ by at most ``gap_tol * sigma_1``."""
    s = svd.sigma
    r = len(s)
    m, n = svd.shape
    blocks = []
    start = 0
    for i in range(1, r + 1):
        if i == r or s[i - 1] - s[i] > gap_tol * s[0]:
            blocks.append((start, i))
            start = i
    return SpectralBlocks(blocks=tuple(blocks), null_dim_right=n - r, null_dim_left=m - r)


def _check_unitary(Q, size, what, tol):
    Q = np.asarray(Q)
    if Q.shape != (size, size):
        raise BlockShapeMismatch(f"{what}: expected ({size}, {size}), got {Q.shape}")
    if size and np.linalg.norm(adjoint(Q) @ Q - np.eye(size)) > tol:
        raise NotUnitary(f"{what} is not unitary")
    return Q


def _block_diag(mats, dtype):
    n = sum(M.shape[0] for M in mats)
    out = np.zeros((n, n), dtype=dtype)
    i = 0
    for M in mats:
        k = M.shape[0]
        out[i:i + k, i:i + k] = M
        i += k
    return out


def reparametrize_svd(svd, blocks, Q_list, Q_null_right, Q_null_left, tol=1e-10):
    """Another SVD of the same matrix: ``V' = V diag(Q_1, ..., Q_p, Q_null_right)``.

    The leading columns of U are recomputed as ``A v'_i / sigma_i``; the trailing
    ones become ``U[:, r:] @ Q_null_left``. Sigma is unchanged.
    """
    m, n = svd.shape
    r = svd.rank
    if len(Q_list) != len(blocks.blocks):
        raise BlockShapeMismatch(f"{len(blocks.blocks)} blocks but {len(Q_list)} unitaries")
    if sum(blocks.sizes()) != r or blocks.null_dim_right != n - r or blocks.null_dim_left != m - r:
        raise BlockShapeMismatch("spectral blocks do not match the factorization")
    mats = [
        _check_unitary(Q, size, f"block {i}", tol)
        for i, (Q, size) in enumerate(zip(Q_list, blocks.sizes()))
    ]
    mats.append(_check_unitary(Q_null_right, n - r, "Q_null_right", tol))
    Qn_left = _check_unitary(Q_null_left, m - r, "Q_null_left", tol)
    dtype = np.result_type(svd.U, svd.V, *mats, Qn_left)
    A = svd.reconstruct()
    V = svd.V.astype(dtype) @ _block_diag(mats, dtype)
    U = np.empty((m, m), dtype=dtype)
    U[:, :r] = (A @ V[:, :r]) / svd.sigma
    U[:, r:] = svd.U[:, r:] @ Qn_left
    return SvdFactors(U=U, sigma=svd.sigma.copy(), V=V)


def _rng(rng):
    if isinstance(rng, np.random.Generator):
        return rng
    return np.random.default_rng(rng)


def random_unitary(n, rng=None, field=REAL):
    """Haar-distributed n x n orthogonal (real) or unitary (complex) matrix.

    QR of an i.i.d. Gaussian matrix, with the columns rescaled so that the
    diagonal of the triangular factor is positive.
    """
    rng = _rng(rng)
    if field == COMPLEX:
        Z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2.0)
    else:
        Z = rng.standard_normal((n, n))
    Q, R = np.linalg.qr(Z)
    d = np.diag(R)
    return Q * (d / np.abs(d))


def random_reparametrization(svd, rng=None, gap_tol=DEFAULT_GAP_TOL):
    """Apply Haar-random unitaries to every block and both null spaces."""
    rng = _rng(rng)
    field = COMPLEX if np.iscomplexobj(svd.U) or np.iscomplexobj(svd.V) else REAL
    blocks = group_spectrum(svd, gap_tol)
    Q_list = [random_unitary(k, rng, field) for k in blocks.sizes()]
    Qr = random_unitary(blocks.null_dim_right, rng, field)
    Ql = random_unitary(blocks.null_dim_left, rng, field)
    return reparametrize_svd(svd, blocks, Q_list, Qr, Ql)


def complete_orthonormal(M, tol=1e-10, check=True):
    """Orthonormal basis N of the orthogonal complement of range(M), so [M N] is unitary.

    The complement is read off a complete Householder QR of M.
    """
    M = np.asarray(M)
    n, k = M.shape
    if check and k and np.linalg.norm(adjoint(M) @ M - np.eye(k)) > tol:
        raise NotOrthonormal("columns of M are not orthonormal")
    dtype = np.result_type(M.dtype, np.float64)
    if k == 0:
        return np.eye(n, dtype=dtype)
    if k >= n:
        return np.zeros((n, 0), dtype=dtype)
    Q, _ = np.linalg.qr(M.astype(dtype, copy=False), mode="complete")
    return Q[:, k:]
