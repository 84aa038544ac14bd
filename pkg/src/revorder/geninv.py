"""Moore-Penrose pseudoinverse, an elimination-based oracle for it, and Penrose-condition classification."""
from dataclasses import dataclass, field

import numpy as np

from . import _accel
from .errors import DimensionMismatch
from .matcore import adjoint, as_matrix, fro_norm
from .svdkit import EPS, compute_svd

DEFAULT_CLASS_TOL = 1e-8
FULL = frozenset({1, 2, 3, 4})


@dataclass(frozen=True)
class InverseClass:
    """Which of the four Penrose conditions a candidate X satisfies for A."""

    satisfied: frozenset
    residuals: dict = field(compare=False)
    tol: float = field(default=DEFAULT_CLASS_TOL, compare=False)

    def has(self, *conds):
        return set(conds) <= self.satisfied

    @property
    def label(self):
        return "{" + ",".join(str(i) for i in sorted(self.satisfied)) + "}"

    def to_dict(self):
        return {
            "satisfied": sorted(self.satisfied),
            "residuals": {str(k): float(v) for k, v in sorted(self.residuals.items())},
            "tol": self.tol,
        }


def pinv(A, rank_tol=None, scale=None):
    """Pseudoinverse ``V diag(1/sigma) U*`` from the Jacobi SVD."""
    A = as_matrix(A)
    s = compute_svd(A, rank_tol=rank_tol, scale=scale)
    r = s.rank
    if r == 0:
        return np.zeros((A.shape[1], A.shape[0]), dtype=A.dtype)
    return (s.V[:, :r] / s.sigma) @ adjoint(s.U[:, :r])


def rank_factorization(A, pivot_tol=None):
    """Split ``A = C R`` with C = A[:, pivots] of full column rank and R in reduced row echelon form.

    Gauss-Jordan elimination with complete (row and column) pivoting; it stops
    once the largest remaining entry is below ``pivot_tol``, which defaults to
    ``max(m, n) * eps`` times the largest column norm.
    """
    A = as_matrix(A)
    m, n = A.shape
    if pivot_tol is None:
        colmax = float(np.max(np.linalg.norm(A, axis=0))) if A.size else 0.0
        pivot_tol = max(m, n) * EPS * colmax
    R = A.copy()
    piv = np.zeros(min(m, n), dtype=np.int64)
    r = _accel.pivoted_rref(R, pivot_tol, piv)
    piv = piv[:r]
    return A[:, piv], R[:r].copy(), piv


def pinv_oracle(A):
    """Pseudoinverse through a rank factorization, independent of the SVD path.

    With ``A = C R`` (C full column rank, R full row rank),
    ``pinv(A) = pinv(R) pinv(C)`` where ``pinv(C) = (C* C)^-1 C*`` and
    ``pinv(R) = R* (R R*)^-1``. Both closed forms are evaluated through thin QR
    factors instead of the normal equations, which would square cond(A).
    """
    A = as_matrix(A)
    C, R, piv = rank_factorization(A)
    if len(piv) == 0:
        return np.zeros((A.shape[1], A.shape[0]), dtype=A.dtype)
    Qc, Tc = np.linalg.qr(C)
    left = np.linalg.solve(Tc, adjoint(Qc))
    Qr, Tr = np.linalg.qr(adjoint(R))
    right = adjoint(np.linalg.solve(Tr, adjoint(Qr)))
    return right @ left


def _res(X, target):
    return fro_norm(X - target) / (1.0 + fro_norm(target))


def penrose_conditions(A, X, tol=DEFAULT_CLASS_TOL):
    """Residuals of AXA=A, XAX=X, (AX)*=AX, (XA)*=XA, each relative to 1 + ||target||."""
    A = np.asarray(A)
    X = np.asarray(X)
    if X.shape != (A.shape[1], A.shape[0]):
        raise DimensionMismatch(f"X has shape {X.shape}, expected {(A.shape[1], A.shape[0])}")
    AX = A @ X
    XA = X @ A
    residuals = {
        1: _res(AX @ A, A),
        2: _res(XA @ X, X),
        3: _res(adjoint(AX), AX),
        4: _res(adjoint(XA), XA),
    }
    sat = frozenset(i for i, r in residuals.items() if r <= tol)
    return InverseClass(satisfied=sat, residuals=residuals, tol=tol)


def projection_residuals(P):
    """(||P^2 - P||, ||P* - P||), each relative to 1 + ||P||."""
    P = np.asarray(P)
    if P.ndim != 2 or P.shape[0] != P.shape[1]:
        raise DimensionMismatch(f"projection must be square, got {P.shape}")
    return _res(P @ P, P), _res(adjoint(P), P)


def is_orthogonal_projection(P, tol=DEFAULT_CLASS_TOL):
    idem, herm = projection_residuals(P)
    return idem <= tol and herm <= tol

