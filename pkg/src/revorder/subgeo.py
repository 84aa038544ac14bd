"""Subspaces with orthonormal bases: ranges, null spaces, intersections, inclusion, principal angles."""
from dataclasses import dataclass

import numpy as np

from .errors import AmbientMismatch, EmptySubspace
from .matcore import adjoint, as_matrix, fro_norm
from .svdkit import complete_orthonormal, compute_svd, svdvals

DEFAULT_ANGLE_TOL = 1e-7
DEFAULT_SUBSPACE_TOL = 1e-8
# sines below this count as a shared direction when intersecting
DEFAULT_INTERSECT_TOL = 1e-7


@dataclass(frozen=True)
class Subspace:
    """Subspace of K^n given by an n x d matrix with orthonormal columns (d may be 0)."""

    basis: np.ndarray

    @property
    def ambient_dim(self):
        return self.basis.shape[0]

    @property
    def dim(self):
        return self.basis.shape[1]

    def projector(self):
        return self.basis @ adjoint(self.basis)

    @classmethod
    def full(cls, n, dtype=np.float64):
        return cls(np.eye(n, dtype=dtype))

    @classmethod
    def zero(cls, n, dtype=np.float64):
        return cls(np.zeros((n, 0), dtype=dtype))


@dataclass(frozen=True)
class AngleSpectrum:
    angles: np.ndarray
    dims: tuple

    def __len__(self):
        return len(self.angles)

    def to_dict(self):
        return {"angles": [float(a) for a in self.angles], "dims": list(self.dims)}


def range_basis(A, rank_tol=None, scale=None):
    A = as_matrix(A)
    m, n = A.shape
    if n == 0:
        return Subspace.zero(m, A.dtype)
    s = compute_svd(A, rank_tol=rank_tol, scale=scale)
    return Subspace(s.U[:, :s.rank])


def null_basis(A, rank_tol=None, scale=None):
    A = as_matrix(A)
    m, n = A.shape
    if m == 0:
        return Subspace.full(n, A.dtype)
    s = compute_svd(A, rank_tol=rank_tol, scale=scale)
    return Subspace(s.V[:, s.rank:])


def complement(S):
    return Subspace(complete_orthonormal(S.basis, check=False))


def _same_ambient(S1, S2):
    if S1.ambient_dim != S2.ambient_dim:
        raise AmbientMismatch(f"ambient dimensions {S1.ambient_dim} and {S2.ambient_dim} differ")


def intersect(S1, S2, tol=DEFAULT_INTERSECT_TOL):
    """S1 ∩ S2 as the null space of the stacked adjoints of both orthogonal complements.

    A vector at angle theta from both subspaces contributes a singular value of
    order sin(theta) to the stack, so `tol` acts as a sine threshold.
    """
    _same_ambient(S1, S2)
    stack = np.vstack([adjoint(complement(S1).basis), adjoint(complement(S2).basis)])
    if stack.shape[0] == 0:
        return Subspace(S1.basis.copy())
    dtype = np.result_type(S1.basis, S2.basis)
    return null_basis(stack.astype(dtype), rank_tol=tol, scale=1.0)


def containment_residual(S1, S2):
    """||(I - P1) B2||_F: zero iff S2 lies in S1."""
    _same_ambient(S1, S2)
    if S2.dim == 0:
        return 0.0
    B1, B2 = S1.basis, S2.basis
    return fro_norm(B2 - B1 @ (adjoint(B1) @ B2))


def contains(S1, S2, tol=DEFAULT_SUBSPACE_TOL):
    """True iff S2 ⊂ S1 up to `tol` (per unit basis vector of S2)."""
    return containment_residual(S1, S2) <= tol * max(1.0, np.sqrt(S2.dim))


def subspace_eq(S1, S2, tol=DEFAULT_SUBSPACE_TOL):
    return S1.dim == S2.dim and contains(S1, S2, tol) and contains(S2, S1, tol)


def principal_angles(S1, S2):
    """Principal angles, ascending, between two nonzero subspaces.

    Cosines are the singular values of B1* B2. Angles whose cosine is below
    1/sqrt(2) are taken from the sines, i.e. the singular values of
    (I - B1 B1*) B2, where arccos loses accuracy.
    """
    _same_ambient(S1, S2)
    if S1.dim == 0 or S2.dim == 0:
        raise EmptySubspace("principal angles need two nonzero subspaces")
    dims = (S1.dim, S2.dim)
    if S1.dim < S2.dim:
        S1, S2 = S2, S1
    B1, B2 = S1.basis, S2.basis
    d = B2.shape[1]
    cos = np.clip(svdvals(adjoint(B1) @ B2), 0.0, 1.0)[:d]
    sin = np.clip(np.sort(svdvals(B2 - B1 @ (adjoint(B1) @ B2))), 0.0, 1.0)[:d]
    angles = np.where(cos >= np.sqrt(0.5), np.arcsin(sin), np.arccos(cos))
    return AngleSpectrum(angles=np.sort(angles), dims=dims)


def angles_all_0_or_right(spectrum, angle_tol=DEFAULT_ANGLE_TOL):
    a = np.asarray(spectrum.angles)
    return bool(np.all((a <= angle_tol) | (np.abs(a - np.pi / 2) <= angle_tol)))
