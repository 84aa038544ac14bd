"""Reverse-order law pinv(AB) = pinv(B) pinv(A): checks, classification, and pair constructors.

Every predicate is evaluated as a residual and thresholded. Residuals of
matrix identities are measured relative to the natural size of the factors
involved (products of spectral norms), so that a product which is zero in
exact arithmetic but carries rounding noise, like AB when range(B) lies in
null(A), does not look like a failure.
"""
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, PlanInfeasible, RolNotSatisfied
from .geninv import (
    DEFAULT_CLASS_TOL,
    FULL,
    InverseClass,
    is_orthogonal_projection,
    penrose_conditions,
)
from .matcore import COMPLEX, REAL, adjoint, as_matrix, field_of, fro_norm
from .subgeo import (
    DEFAULT_ANGLE_TOL,
    AngleSpectrum,
    Subspace,
    angles_all_0_or_right,
    contains,
    intersect,
    principal_angles,
    range_basis,
    subspace_eq,
)
from .svdkit import (
    DEFAULT_GAP_TOL,
    SvdFactors,
    complete_orthonormal,
    compute_svd,
    random_unitary,
    svdvals,
)

# relative rank threshold for matrices formed as products of the inputs
PRODUCT_RANK_TOL = 1e-10


def _rng(seed):
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def _norm2(M):
    if M.size == 0:
        return 0.0
    return float(svdvals(M)[0])


def _pinv_from_svd(s):
    r = s.rank
    if r == 0:
        return np.zeros((s.shape[1], s.shape[0]), dtype=np.result_type(s.U, s.V))
    return (s.V[:, :r] / s.sigma) @ adjoint(s.U[:, :r])


def _pinv_scaled(M, scale):
    """pinv(M), discarding singular values below PRODUCT_RANK_TOL * scale."""
    return _pinv_from_svd(compute_svd(M, rank_tol=PRODUCT_RANK_TOL, scale=scale))


def _rank_scaled(M, scale):
    return compute_svd(M, rank_tol=PRODUCT_RANK_TOL, scale=scale).rank


def _gap(L, R, floor):
    """||L - R||_F relative to the larger of ||L||, ||R|| and `floor` (0 when all vanish)."""
    den = max(fro_norm(L), fro_norm(R), floor)
    if den == 0.0:
        return 0.0
    return fro_norm(L - R) / den


def _conformable(A, B):
    A = as_matrix(A)
    B = as_matrix(B)
    if A.shape[1] != B.shape[0]:
        raise DimensionMismatch(f"A is {A.shape}, B is {B.shape}: A.cols must equal B.rows")
    dtype = np.result_type(A, B)
    return A.astype(dtype, copy=False), B.astype(dtype, copy=False)


class _Pair:
    """Lazily shared quantities for one pair (A, B)."""

    def __init__(self, A, B):
        A, B = _conformable(A, B)
        self.A, self.B = A, B
        self.svdA = compute_svd(A)
        self.svdB = compute_svd(B)
        self.rA, self.rB = self.svdA.rank, self.svdB.rank
        self.nA = float(self.svdA.sigma[0]) if self.rA else 0.0
        self.nB = float(self.svdB.sigma[0]) if self.rB else 0.0
        self.pA = _pinv_from_svd(self.svdA)
        self.pB = _pinv_from_svd(self.svdB)
        self.npA = 1.0 / float(self.svdA.sigma[-1]) if self.rA else 0.0
        self.npB = 1.0 / float(self.svdB.sigma[-1]) if self.rB else 0.0
        self.AB = A @ B
        self._pAB = None
        self.X = self.pB @ self.pA
        VA = self.svdA.V[:, :self.rA]
        UB = self.svdB.U[:, :self.rB]
        self.rngAs = Subspace(VA)
        self.rngB = Subspace(UB)
        self.PA = VA @ adjoint(VA)  # pinv(A) A
        self.PB = UB @ adjoint(UB)  # B pinv(B)
        self.AA = adjoint(A) @ A
        self.BB = B @ adjoint(B)
        self._cap = None

    @property
    def pAB(self):
        if self._pAB is None:
            self._pAB = _pinv_scaled(self.AB, self.nA * self.nB)
        return self._pAB

    @property
    def cap(self):
        if self._cap is None:
            self._cap = intersect(self.rngAs, self.rngB)
        return self._cap

    def angles(self):
        if self.rA == 0 or self.rB == 0:
            return AngleSpectrum(angles=np.zeros(0), dims=(self.rA, self.rB))
        return principal_angles(self.rngAs, self.rngB)

    @property
    def n(self):
        return self.A.shape[1]


# -- reports ---------------------------------------------------------------


@dataclass(frozen=True)
class Verdict:
    holds: bool
    residual: float

    def to_dict(self):
        return {"holds": bool(self.holds), "residual": float(self.residual)}


def _plain(obj):
    """Recursively replace numpy scalars by Python ones so reports serialize as JSON."""
    if isinstance(obj, dict):
        return {k: _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.generic):
        return obj.item()
    return obj


def _verdict(residual, tol):
    return Verdict(holds=bool(residual <= tol), residual=float(residual))


@dataclass(frozen=True)
class RolReport:
    """Verdicts of every full-ROL criterion for one pair, with residuals."""

    penrose_class: InverseClass
    rol_residual: float
    rol_holds: bool
    greville_ii_a: Verdict
    greville_ii_b: Verdict
    greville_iii: Verdict
    commute_pAA_BB: Verdict
    commute_BpB_AA: Verdict
    proj_test: Verdict
    squared_rol: Verdict
    block_form: bool
    angles: AngleSpectrum
    angles_0_or_right: bool
    rank_AB: int
    dim_intersection: int
    tol: float
    angle_tol: float

    def full_rol_predicates(self):
        """The seven criteria that are each equivalent to pinv(AB) = pinv(B) pinv(A)."""
        return {
            "rol_residual": self.rol_holds,
            "greville_ii": self.greville_ii_a.holds and self.greville_ii_b.holds,
            "greville_iii": self.greville_iii.holds,
            "commute": self.commute_pAA_BB.holds and self.commute_BpB_AA.holds,
            "squared_rol": self.squared_rol.holds,
            "proj_test": self.proj_test.holds,
            "block_form": self.block_form,
        }

    def consistent(self):
        vals = set(self.full_rol_predicates().values())
        vals.add(self.penrose_class.satisfied == FULL)
        return len(vals) == 1

    def to_dict(self):
        return _plain({
            "penrose_class": self.penrose_class.to_dict(),
            "rol_residual": self.rol_residual,
            "rol_holds": self.rol_holds,
            "greville": {
                "ii_a": self.greville_ii_a.to_dict(),
                "ii_b": self.greville_ii_b.to_dict(),
                "iii": self.greville_iii.to_dict(),
            },
            "commute": {
                "pAA_BB": self.commute_pAA_BB.to_dict(),
                "BpB_AA": self.commute_BpB_AA.to_dict(),
            },
            "proj_test": self.proj_test.to_dict(),
            "squared_rol": self.squared_rol.to_dict(),
            "block_form": self.block_form,
            "angle_class": {
                **self.angles.to_dict(),
                "all_0_or_right": self.angles_0_or_right,
            },
            "rank_AB": self.rank_AB,
            "dim_intersection": self.dim_intersection,
            "tol": self.tol,
            "angle_tol": self.angle_tol,
            "consistent": self.consistent(),
        })


def _greville(p):
    bound_a = p.nA ** 2 * p.nB
    M = p.AA @ p.B
    ii_a = fro_norm(M - p.PB @ M) / bound_a if bound_a else 0.0
    bound_b = p.nB ** 2 * p.nA
    N = p.BB @ adjoint(p.A)
    ii_b = fro_norm(N - p.PA @ N) / bound_b if bound_b else 0.0
    lhs = p.PA @ p.BB @ p.AA @ p.PB
    rhs = p.BB @ p.AA
    bound = (p.nA * p.nB) ** 2
    iii = fro_norm(lhs - rhs) / bound if bound else 0.0
    return ii_a, ii_b, iii


def greville_check(A, B, tol=DEFAULT_CLASS_TOL):
    """Greville's conditions: range(A*AB) ⊂ range(B), range(BB*A*) ⊂ range(A*), and
    ``pinv(A) A B B* A* A B pinv(B) = B B* A* A``. Returns three booleans."""
    ii_a, ii_b, iii = _greville(_Pair(A, B))
    return ii_a <= tol, ii_b <= tol, iii <= tol


def _rol_residual(p):
    return _gap(p.pAB, p.X, p.npA * p.npB)


def _squared_rol_residual(p):
    sA, sB = p.svdA, p.svdB
    # pinv(A*A) and pinv(BB*) straight from the factors of A and B
    pAA = (sA.V[:, :p.rA] / sA.sigma ** 2) @ adjoint(sA.V[:, :p.rA])
    pBB = (sB.U[:, :p.rB] / sB.sigma ** 2) @ adjoint(sB.U[:, :p.rB])
    lhs = _pinv_scaled(p.AA @ p.BB, (p.nA * p.nB) ** 2)
    return _gap(lhs, pBB @ pAA, (p.npA * p.npB) ** 2)


def _block_form(p, greville_ok, angle_tol):
    spectrum = p.angles()
    if not angles_all_0_or_right(spectrum, angle_tol):
        return False
    unit = int(np.count_nonzero(spectrum.angles <= angle_tol))
    return greville_ok and unit == p.cap.dim


def classify_pair(A, B, tol=DEFAULT_CLASS_TOL, angle_tol=DEFAULT_ANGLE_TOL):
    """Evaluate every full reverse-order-law criterion for the pair (A, B)."""
    p = _Pair(A, B)
    return _classify(p, tol, angle_tol)


def _classify(p, tol, angle_tol):
    ii_a, ii_b, iii = _greville(p)
    g_a, g_b, g_iii = _verdict(ii_a, tol), _verdict(ii_b, tol), _verdict(iii, tol)
    c1 = fro_norm(p.PA @ p.BB - p.BB @ p.PA) / p.nB ** 2 if p.rB else 0.0
    c2 = fro_norm(p.PB @ p.AA - p.AA @ p.PB) / p.nA ** 2 if p.rA else 0.0
    P = p.B @ p.pAB @ p.A
    proj = is_orthogonal_projection(P, tol)
    proj_res = max(
        fro_norm(P @ P - P) / (1.0 + fro_norm(P)),
        fro_norm(adjoint(P) - P) / (1.0 + fro_norm(P)),
    )
    spectrum = p.angles()
    rol = _rol_residual(p)
    return RolReport(
        penrose_class=penrose_conditions(p.AB, p.X, tol),
        rol_residual=rol,
        rol_holds=rol <= tol,
        greville_ii_a=g_a,
        greville_ii_b=g_b,
        greville_iii=g_iii,
        commute_pAA_BB=_verdict(c1, tol),
        commute_BpB_AA=_verdict(c2, tol),
        proj_test=Verdict(proj, proj_res),
        squared_rol=_verdict(_squared_rol_residual(p), tol),
        block_form=_block_form(p, g_a.holds and g_b.holds, angle_tol),
        angles=spectrum,
        angles_0_or_right=angles_all_0_or_right(spectrum, angle_tol),
        rank_AB=_rank_scaled(p.AB, p.nA * p.nB),
        dim_intersection=p.cap.dim,
        tol=tol,
        angle_tol=angle_tol,
    )


def rol_residual(A, B):
    """Relative gap between pinv(AB) and pinv(B) pinv(A)."""
    return _rol_residual(_Pair(A, B))


def block_form_check(A, B, tol=DEFAULT_CLASS_TOL, angle_tol=DEFAULT_ANGLE_TOL):
    """Whether V_A* U_B can be brought to the form [[Q, 0], [0, 0]] with Q unitary (or is 0).

    Tested as: every singular value of V_A* U_B is 0 or 1 (principal angles in
    {0, pi/2}), the number of unit values equals dim(range(A*) ∩ range(B)), and
    both Greville inclusions hold.
    """
    p = _Pair(A, B)
    ii_a, ii_b, _ = _greville(p)
    return _block_form(p, ii_a <= tol and ii_b <= tol, angle_tol)


# -- twelve {1,2} criteria -------------------------------------------------

TWELVE_ITEMS = ("i", "ii", "iii", "iv", "v", "vi", "vii", "viii", "ix", "x", "xi", "xii")


def _simultaneously_diagonal(P, Q):
    """Off-diagonal mass of P and Q in the eigenbasis of P + sqrt(2) Q."""
    _, W = np.linalg.eigh(P + np.sqrt(2.0) * Q)
    Wh = adjoint(W)
    off = 0.0
    for M in (P, Q):
        D = Wh @ M @ W
        off = max(off, fro_norm(D - np.diag(np.diag(D))))
    return off


def _twelve(p, tol, angle_tol):
    PA, PB = p.PA, p.PB
    res = {}
    cls = penrose_conditions(p.AB, p.X, tol)
    res["i"] = max(cls.residuals[1], cls.residuals[2])
    back = penrose_conditions(p.X, p.AB, tol)
    res["ii"] = max(back.residuals[1], back.residuals[2])
    M = PA @ p.B
    res["iii"] = fro_norm(M - PB @ M) / p.nB if p.rB else 0.0
    N = PB @ p.pA
    res["iv"] = fro_norm(N - PA @ N) / p.npA if p.rA else 0.0
    spectrum = p.angles()
    res["v"] = 0.0 if angles_all_0_or_right(spectrum, angle_tol) else float(
        np.max(np.minimum(spectrum.angles, np.abs(np.pi / 2 - spectrum.angles)))
    )
    PQ = PA @ PB
    QP = PB @ PA
    res["vi"] = max(fro_norm(PQ @ PQ - PQ), fro_norm(adjoint(PQ) - PQ))
    res["vii"] = max(fro_norm(QP @ QP - QP), fro_norm(adjoint(QP) - QP))
    res["viii"] = fro_norm(PQ - QP)
    res["ix"] = _simultaneously_diagonal(PA, PB)
    res["x"] = fro_norm(PQ - 2.0 * PA @ _pinv_from_svd(compute_svd(PA + PB)) @ PB)
    res["xi"] = fro_norm(PQ @ PQ - QP)
    ev = np.linalg.eigvalsh(PA @ PB @ PA) if p.n else np.zeros(0)
    res["xii"] = float(np.max(np.minimum(np.abs(ev), np.abs(ev - 1.0)))) if ev.size else 0.0
    holds = {}
    for k, r in res.items():
        holds[k] = bool(r <= angle_tol) if k == "v" else bool(r <= tol)
    return holds, res


def twelve_way_suite(A, B, tol=DEFAULT_CLASS_TOL, angle_tol=DEFAULT_ANGLE_TOL, residuals=False):
    """The twelve mutually equivalent criteria for pinv(B) pinv(A) being a {1,2}-inverse of AB.

    Returns a dict item -> bool (items "i" ... "xii"); with ``residuals=True``
    also the dict of raw residuals. Item v's residual is the largest distance of
    a principal angle from {0, pi/2} and is thresholded with `angle_tol`.
    """
    holds, res = _twelve(_Pair(A, B), tol, angle_tol)
    if residuals:
        return holds, res
    return holds


def rol_and_twelve(A, B, tol=DEFAULT_CLASS_TOL, angle_tol=DEFAULT_ANGLE_TOL):
    """pinv(AB), pinv(B) pinv(A), the reverse-order residual and the twelve-way verdicts from one SVD pass.

    Returns a dict with keys ``pinv_AB``, ``pinv_B_pinv_A``, ``rol_residual``, ``twelve``.
    """
    p = _Pair(A, B)
    holds, _ = _twelve(p, tol, angle_tol)
    return {
        "pinv_AB": p.pAB,
        "pinv_B_pinv_A": p.X,
        "rol_residual": _rol_residual(p),
        "twelve": holds,
    }


# -- {1,2,3} and {1,2,4} ---------------------------------------------------


@dataclass(frozen=True)
class InverseClassReport:
    is12: bool
    is123: bool
    is124: bool
    is1234: bool
    criteria_123: dict
    criteria_124: dict
    penrose_class: InverseClass
    agree: bool

    def to_dict(self):
        return _plain({
            "is12": self.is12,
            "is123": self.is123,
            "is124": self.is124,
            "is1234": self.is1234,
            "criteria_123": dict(self.criteria_123),
            "criteria_124": dict(self.criteria_124),
            "penrose_class": self.penrose_class.to_dict(),
            "agree": self.agree,
        })


def _classify_123_124(p, tol):
    cls = penrose_conditions(p.AB, p.X, tol)
    cap = p.cap
    ABX = p.AB @ p.X
    XAB = p.X @ p.AB
    c123 = {
        "range_eq_intersection": subspace_eq(
            range_basis(p.AA @ p.B, PRODUCT_RANK_TOL, p.nA ** 2 * p.nB), cap, tol
        ),
        "orthogonal_projection": is_orthogonal_projection(ABX, tol),
        "equals_AB_pinvAB": fro_norm(ABX - p.AB @ p.pAB) <= tol * (1.0 + fro_norm(ABX)),
    }
    c124 = {
        "range_eq_intersection": subspace_eq(
            range_basis(p.BB @ adjoint(p.A), PRODUCT_RANK_TOL, p.nB ** 2 * p.nA), cap, tol
        ),
        "orthogonal_projection": is_orthogonal_projection(XAB, tol),
        "equals_pinvAB_AB": fro_norm(XAB - p.pAB @ p.AB) <= tol * (1.0 + fro_norm(XAB)),
    }
    is12 = cls.has(1, 2)
    is123 = c123["orthogonal_projection"]
    is124 = c124["orthogonal_projection"]
    agree = (
        len(set(c123.values())) == 1
        and len(set(c124.values())) == 1
        and is123 == cls.has(1, 2, 3)
        and is124 == cls.has(1, 2, 4)
        and (is12 or not (is123 or is124))
    )
    return InverseClassReport(
        is12=is12,
        is123=is123,
        is124=is124,
        is1234=is123 and is124,
        criteria_123=c123,
        criteria_124=c124,
        penrose_class=cls,
        agree=agree,
    )


def classify_123_124(A, B, tol=DEFAULT_CLASS_TOL):
    """Decide whether pinv(B) pinv(A) is a {1,2}-, {1,2,3}-, {1,2,4}- or {1,2,3,4}-inverse of AB.

    Membership in {1,2,3} is computed three independent ways (range of A*AB
    equals range(A*) ∩ range(B); AB pinv(B) pinv(A) is an orthogonal projection;
    AB pinv(B) pinv(A) = AB pinv(AB)); {1,2,4} by the adjoint-mirrored trio.
    ``agree`` records whether all of them and the direct Penrose test coincide.
    """
    return _classify_123_124(_Pair(A, B), tol)


@dataclass(frozen=True)
class FullReport:
    rol: RolReport
    twelve: dict
    twelve_residuals: dict
    classes: InverseClassReport

    def consistent(self):
        return (
            self.rol.consistent()
            and len(set(self.twelve.values())) == 1
            and self.classes.agree
            and self.twelve["i"] == self.classes.is12
        )

    def to_dict(self):
        return _plain({
            "rol": self.rol.to_dict(),
            "twelve": {
                k: {"holds": self.twelve[k], "residual": float(self.twelve_residuals[k])}
                for k in TWELVE_ITEMS
            },
            "classes": self.classes.to_dict(),
            "consistent": self.consistent(),
        })


def full_report(A, B, tol=DEFAULT_CLASS_TOL, angle_tol=DEFAULT_ANGLE_TOL):
    """classify_pair, twelve_way_suite and classify_123_124 sharing one set of factorizations."""
    p = _Pair(A, B)
    twelve, res = _twelve(p, tol, angle_tol)
    return FullReport(
        rol=_classify(p, tol, angle_tol),
        twelve=twelve,
        twelve_residuals=res,
        classes=_classify_123_124(p, tol),
    )


# -- derived identities ----------------------------------------------------


def _require_rol(p, tol):
    ii_a, ii_b, _ = _greville(p)
    if ii_a > tol or ii_b > tol or _rol_residual(p) > tol:
        raise RolNotSatisfied("pinv(AB) != pinv(B) pinv(A) for this pair")


DERIVED_NAMES = (
    "pinv((AB)B*) = pinv(B*) pinv(AB)",
    "pinv((AB)pinv(B)) = B pinv(AB)",
    "pinv(A*(AB)) = pinv(AB) pinv(A*)",
    "pinv(pinv(A)(AB)) = pinv(AB) A",
    "pinv((A*A)B) = pinv(B) pinv(A*A)",
    "pinv(A(BB*)) = pinv(BB*) pinv(A)",
    "pinv((pinv(A)A)B) = pinv(B) (pinv(A)A)",
    "pinv(A(B pinv(B))) = (B pinv(B)) pinv(A)",
    "pinv(pinv(B) A*) = pinv(A*) B",
    "pinv(B* pinv(A)) = A pinv(B*)",
    "AB pinv(AB) = (AA*AB) pinv(AA*AB)",
    "AB pinv(AB) = (ABB*A*) pinv(ABB*A*)",
    "(AA*AB) pinv(AA*AB) = (ABB*A*) pinv(ABB*A*)",
)


def derived_rols_check(A, B, tol=DEFAULT_CLASS_TOL):
    """Residuals of the reverse-order laws and range projections implied by the full ROL.

    Raises RolNotSatisfied unless pinv(AB) = pinv(B) pinv(A) holds for (A, B).
    """
    p = _Pair(A, B)
    _require_rol(p, tol)
    A, B, AB, pAB = p.A, p.B, p.AB, p.pAB
    Ah, Bh = adjoint(A), adjoint(B)
    nA, nB, npA, npB = p.nA, p.nB, p.npA, p.npB
    nAB = nA * nB
    npAB = _norm2(pAB)
    pAh, pBh = adjoint(p.pA), adjoint(p.pB)
    pAA = p.pA @ pAh  # pinv(A*A)
    pBB = pBh @ p.pB  # pinv(BB*)

    def law(lhs, lhs_scale, rhs, rhs_bound):
        return _gap(_pinv_scaled(lhs, lhs_scale), rhs, rhs_bound)

    out = {}
    cases = [
        (AB @ Bh, nAB * nB, pBh @ pAB, npB * npAB),
        (AB @ p.pB, nAB * npB, B @ pAB, nB * npAB),
        (Ah @ AB, nA * nAB, pAB @ pAh, npAB * npA),
        (p.pA @ AB, npA * nAB, pAB @ A, npAB * nA),
        (p.AA @ B, nA ** 2 * nB, p.pB @ pAA, npB * npA ** 2),
        (A @ p.BB, nA * nB ** 2, pBB @ p.pA, npB ** 2 * npA),
        (p.PA @ B, nB, p.pB @ p.PA, npB),
        (A @ p.PB, nA, p.PB @ p.pA, npA),
        (p.pB @ Ah, npB * nA, pAh @ B, npA * nB),
        (Bh @ p.pA, nB * npA, A @ pBh, nA * npB),
    ]
    for name, (lhs, sc, rhs, bound) in zip(DERIVED_NAMES, cases):
        out[name] = law(lhs, sc, rhs, bound)
    M2 = A @ Ah @ AB
    M3 = AB @ Bh @ Ah
    P1 = AB @ pAB
    P2 = M2 @ _pinv_scaled(M2, nA ** 3 * nB)
    P3 = M3 @ _pinv_scaled(M3, nA ** 2 * nB ** 2)
    out[DERIVED_NAMES[10]] = fro_norm(P1 - P2)
    out[DERIVED_NAMES[11]] = fro_norm(P1 - P3)
    out[DERIVED_NAMES[12]] = fro_norm(P2 - P3)
    return out


# -- aligned SVDs ------------------------------------------------------------


def _restricted_eigvecs(H, basis):
    """Eigenpairs of the Hermitian H restricted to the invariant subspace spanned by `basis`."""
    if basis.shape[1] == 0:
        return np.zeros(0), basis
    C = adjoint(basis) @ H @ basis
    C = 0.5 * (C + adjoint(C))
    w, Y = np.linalg.eigh(C)
    return w, basis @ Y


def _aligned_factors(M, H, first, second, rank, gap_tol):
    """SVD of M whose right singular vectors are eigenvectors of H = M*M taken from
    two complementary invariant subspaces; within a group of equal singular values
    vectors from `first` come before those from `second`."""
    w1, X1 = _restricted_eigvecs(H, first)
    w2, X2 = _restricted_eigvecs(H, second)
    w = np.concatenate([w1, w2])
    X = np.hstack([X1, X2])
    origin = np.concatenate([np.zeros(len(w1), int), np.ones(len(w2), int)])
    order = np.argsort(-w, kind="stable")
    keep = order[:rank]
    rest = order[rank:]
    lam = np.clip(w[keep], 0.0, None)
    sig = np.sqrt(lam)
    # group equal singular values, then put `first`-origin vectors ahead
    groups = []
    start = 0
    for i in range(1, rank + 1):
        if i == rank or sig[i - 1] - sig[i] > gap_tol * sig[0]:
            groups.append(range(start, i))
            start = i
    ordered = []
    for g in groups:
        idx = list(g)
        idx.sort(key=lambda t: origin[keep[t]])
        ordered.extend(keep[t] for t in idx)
    ordered = np.array(ordered, dtype=int)
    Vr = X[:, ordered]
    sigma = np.sqrt(np.clip(w[ordered], 0.0, None))
    V = np.hstack([Vr, X[:, rest]])
    Ur = (M @ Vr) / sigma if rank else np.zeros((M.shape[0], 0), dtype=V.dtype)
    U = np.hstack([Ur, complete_orthonormal(Ur, check=False)])
    return SvdFactors(U=U, sigma=sigma, V=V), origin[ordered]


@dataclass(frozen=True)
class AlignedSvds:
    """SVDs of A and B whose singular vectors respect range(B) and range(A*).

    ``svd_A.V[:, i]`` (i < r_A) lies in range(B) when ``in_range_B[i]`` and in
    null(B*) otherwise; ``svd_B.U[:, j]`` (j < r_B) lies in range(A*) when
    ``in_range_As[j]`` and in null(A) otherwise.
    """

    svd_A: SvdFactors
    svd_B: SvdFactors
    in_range_B: np.ndarray
    in_range_As: np.ndarray

    def __iter__(self):
        return iter((self.svd_A, self.svd_B))


def aligned_svds(A, B, tol=DEFAULT_CLASS_TOL, gap_tol=DEFAULT_GAP_TOL):
    """SVDs of A and B in which range(B) is spanned by right singular vectors of A
    and range(A*) by left singular vectors of B.

    A*A is diagonalized separately on range(B) and on null(B*), both invariant
    under the Greville inclusions; BB* likewise on range(A*) and null(A).
    Raises RolNotSatisfied when the reverse-order law fails.
    """
    p = _Pair(A, B)
    _require_rol(p, tol)
    sB, sA = p.svdB, p.svdA
    rngB, nullBh = sB.U[:, :p.rB], sB.U[:, p.rB:]
    rngAh, nullA = sA.V[:, :p.rA], sA.V[:, p.rA:]
    fA, oA = _aligned_factors(p.A, p.AA, rngB, nullBh, p.rA, gap_tol)
    gB, oB = _aligned_factors(adjoint(p.B), p.BB, rngAh, nullA, p.rB, gap_tol)
    svd_B = SvdFactors(U=gB.V, sigma=gB.sigma, V=gB.U)
    return AlignedSvds(svd_A=fA, svd_B=svd_B, in_range_B=oA == 0, in_range_As=oB == 0)


def svd_span_spaces(A, B, svd_A, svd_B, tol=DEFAULT_CLASS_TOL):
    """The two spans compared by the necessary condition, for given SVDs of A and B.

    Left: span of the left singular vectors of B not in null(A).
    Right: span of the right singular vectors of A not in null(B*).
    Returns ``(left, right, equal)``.
    """
    A, B = _conformable(A, B)
    rA, rB = svd_A.rank, svd_B.rank
    uB = svd_B.U[:, :rB]
    vA = svd_A.V[:, :rA]
    nA = float(svd_A.sigma[0]) if rA else 0.0
    nB = float(svd_B.sigma[0]) if rB else 0.0
    keep_u = [j for j in range(rB) if np.linalg.norm(A @ uB[:, j]) > tol * nA]
    keep_v = [i for i in range(rA) if np.linalg.norm(adjoint(B) @ vA[:, i]) > tol * nB]
    left = range_basis(uB[:, keep_u]) if keep_u else Subspace.zero(A.shape[1], A.dtype)
    right = range_basis(vA[:, keep_v]) if keep_v else Subspace.zero(A.shape[1], A.dtype)
    return left, right, subspace_eq(left, right, tol)


# -- constructors ------------------------------------------------------------


def random_integer_sigma(r, rng):
    """r integer singular values drawn uniformly from 1..r, sorted non-increasing."""
    if r == 0:
        return np.zeros(0)
    return np.sort(rng.integers(1, r + 1, size=r).astype(float))[::-1]


def random_rank_matrix(m, n, r, seed=None, field=REAL, sigma=None):
    """U diag(sigma) V* with Haar U, V and (by default) integer singular values in 1..r."""
    if not 0 <= r <= min(m, n):
        raise PlanInfeasible(f"rank {r} impossible for a {m}x{n} matrix")
    rng = _rng(seed)
    sig = random_integer_sigma(r, rng) if sigma is None else np.asarray(sigma, float)
    U = random_unitary(m, rng, field)
    V = random_unitary(n, rng, field)
    return (U[:, :r] * sig) @ adjoint(V[:, :r])


@dataclass
class ConstructionPlan:
    """Recipe for a partner B of a given A.

    ``J_size`` right singular vectors of A (the first ones, or those listed in
    ``J``) are mixed by a random unitary and become the leading left singular
    vectors of B; ``extra_null_dirs`` further ones are taken from null(A).
    """

    J_size: int
    extra_null_dirs: int
    target_cols_k: int
    sigma_B: list = None
    seed: int = 0
    J: list = None
    mix: bool = True
    field: str = None

    @property
    def target_rank_rB(self):
        return self.J_size + self.extra_null_dirs


def _check_plan(plan, n, r):
    s, t, k = plan.J_size, plan.extra_null_dirs, plan.target_cols_k
    rB = s + t
    if s < 0 or t < 0:
        raise PlanInfeasible("J_size and extra_null_dirs must be nonnegative")
    if s > r:
        raise PlanInfeasible(f"J_size={s} exceeds rank {r}")
    if t > n - r:
        raise PlanInfeasible(f"extra_null_dirs={t} exceeds nullity {n - r}")
    if k < rB or rB > n:
        raise PlanInfeasible(f"rank {rB} does not fit an {n}x{k} partner")
    if plan.J is not None:
        J = list(plan.J)
        if len(J) != s or len(set(J)) != s or any(not 0 <= j < r for j in J):
            raise PlanInfeasible("J must list J_size distinct indices below rank(A)")
    if plan.sigma_B is not None:
        sig = np.asarray(plan.sigma_B, float)
        if sig.shape != (rB,) or np.any(sig <= 0):
            raise PlanInfeasible(f"sigma_B must hold {rB} positive values")


def construct_partner(A, plan):
    """A matrix B (n x k, rank J_size + extra_null_dirs) with pinv(AB) = pinv(B) pinv(A)."""
    A = as_matrix(A)
    n = A.shape[1]
    sA = compute_svd(A)
    r = sA.rank
    _check_plan(plan, n, r)
    fld = plan.field or field_of(A)
    rng = _rng(plan.seed)
    s, t, k = plan.J_size, plan.extra_null_dirs, plan.target_cols_k
    rB = s + t
    J = list(range(s)) if plan.J is None else list(plan.J)
    lead = sA.V[:, J]
    if plan.mix and s:
        lead = lead @ random_unitary(s, rng, fld)
    cols = np.hstack([lead, sA.V[:, r:r + t]])
    sig = random_integer_sigma(rB, rng) if plan.sigma_B is None else np.asarray(plan.sigma_B, float)
    VB = random_unitary(k, rng, fld)
    B = (cols * sig) @ adjoint(VB[:, :rB])
    return as_matrix(B, COMPLEX if COMPLEX in (fld, field_of(A)) else REAL)


def construct_partner_left(B, plan):
    """A matrix A (target_cols_k x n) with pinv(AB) = pinv(B) pinv(A), via B* and adjoints."""
    return adjoint(construct_partner(adjoint(as_matrix(B)), plan))


def _sigmas(sigma, ranks, rng):
    """(sigma_A, sigma_B): user values when given, else integers drawn from 1..r."""
    rA, rB = ranks
    if sigma is None:
        return random_integer_sigma(rA, rng), random_integer_sigma(rB, rng)
    sA, sB = (np.asarray(x, float) for x in sigma)
    if sA.shape != (rA,) or sB.shape != (rB,) or np.any(sA <= 0) or np.any(sB <= 0):
        raise PlanInfeasible(f"sigma must hold {rA} and {rB} positive values")
    return sA, sB


def _check_dims(dims, ranks, N):
    m, n, k = dims
    rA, rB = ranks
    if min(m, n, k) < 1:
        raise PlanInfeasible("dimensions must be positive")
    if not 0 <= rA <= min(m, n) or not 0 <= rB <= min(n, k):
        raise PlanInfeasible(f"ranks {ranks} do not fit dims {dims}")
    if not 0 <= N <= min(rA, rB):
        raise PlanInfeasible(f"N={N} must lie in [0, min(rA, rB)]")


def construct_pair_rol(dims, ranks, N, seed=0, field=REAL, sigma=None):
    """Random A of rank r_A and a partner B built with |J| = N."""
    m, n, k = dims
    rA, rB = ranks
    _check_dims(dims, ranks, N)
    rng = _rng(seed)
    sA, sB = _sigmas(sigma, ranks, rng)
    A = random_rank_matrix(m, n, rA, rng, field, sigma=sA)
    plan = ConstructionPlan(
        J_size=N, extra_null_dirs=rB - N, target_cols_k=k, sigma_B=list(sB), seed=rng, field=field
    )
    return A, construct_partner(A, plan)


def construct_pair_12(dims, ranks, N, seed=0, field=REAL, sigma=None):
    """A pair with principal angles between range(A*) and range(B) exactly N zeros and
    the rest pi/2, whose singular vectors are then remixed so that pinv(B) pinv(A) is a
    {1,2}-inverse of AB but generically not a {1,2,3}- or {1,2,4}-inverse."""
    m, n, k = dims
    rA, rB = ranks
    _check_dims(dims, ranks, N)
    if rA + rB - N > n:
        raise PlanInfeasible("r_A + r_B - N exceeds n")
    rng = _rng(seed)
    cap = random_unitary(n, rng, field)[:, :N]
    VA = np.hstack([cap, complete_orthonormal(cap, check=False)])
    nullA = complete_orthonormal(VA[:, :rA], check=False)
    UB = np.hstack([cap, nullA[:, :rB - N]])
    VA = VA.copy()
    VA[:, :rA] = VA[:, :rA] @ random_unitary(rA, rng, field)
    UB = UB @ random_unitary(rB, rng, field)
    sA, sB = _sigmas(sigma, ranks, rng)
    UA = random_unitary(m, rng, field)
    VB = random_unitary(k, rng, field)
    A = (UA[:, :rA] * sA) @ adjoint(VA[:, :rA])
    B = (UB * sB) @ adjoint(VB[:, :rB])
    return A, B


def construct_pair_123(dims, ranks, N, seed=0, field=REAL, sigma=None):
    """range(B) spanned by a unitary mix of r_B right singular vectors of A, N of them
    inside range(A*): pinv(B) pinv(A) is a {1,2,3}-inverse of AB."""
    m, n, k = dims
    rA, rB = ranks
    _check_dims(dims, ranks, N)
    if rA - N + rB > n:
        raise PlanInfeasible("r_A - N + r_B exceeds n")
    rng = _rng(seed)
    VA = random_unitary(n, rng, field)
    CB = VA[:, rA - N:rA - N + rB] @ random_unitary(rB, rng, field)
    UA = random_unitary(m, rng, field)
    VB = random_unitary(k, rng, field)
    sA, sB = _sigmas(sigma, ranks, rng)
    A = (UA[:, :rA] * sA) @ adjoint(VA[:, :rA])
    B = (CB * sB) @ adjoint(VB[:, :rB])
    return A, B


def construct_pair_124(dims, ranks, N, seed=0, field=REAL, sigma=None):
    """Adjoint mirror of construct_pair_123: pinv(B) pinv(A) is a {1,2,4}-inverse of AB."""
    m, n, k = dims
    rA, rB = ranks
    mirrored = None if sigma is None else (sigma[1], sigma[0])
    A2, B2 = construct_pair_123((k, n, m), (rB, rA), N, seed, field, mirrored)
    return adjoint(B2), adjoint(A2)


def construct_pair_zero(dims, ranks, seed=0, field=REAL):
    """A pair with AB = 0: every left singular vector of B lies in null(A)."""
    m, n, k = dims
    rA, rB = ranks
    _check_dims(dims, ranks, 0)
    rng = _rng(seed)
    A = random_rank_matrix(m, n, rA, rng, field)
    plan = ConstructionPlan(J_size=0, extra_null_dirs=rB, target_cols_k=k, seed=rng, field=field)
    return A, construct_partner(A, plan)
