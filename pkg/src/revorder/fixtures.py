"""Published small-matrix examples with their reference values, runnable as a regression table."""
from dataclasses import dataclass

import numpy as np

from .geninv import pinv
from .matcore import COMPLEX, REAL, adjoint, as_matrix, fro_norm
from .rolkit import (
    ConstructionPlan,
    aligned_svds,
    classify_123_124,
    construct_pair_12,
    construct_pair_123,
    construct_pair_rol,
    construct_partner,
    derived_rols_check,
    full_report,
    random_rank_matrix,
    svd_span_spaces,
)
from .subgeo import DEFAULT_ANGLE_TOL, Subspace, subspace_eq
from .svdkit import SvdFactors, compute_svd, random_reparametrization, random_unitary

INTRO_A = np.array([[1.0, 1.0]])
INTRO_B = np.array([[1.0], [0.0]])

COUNTER_A = np.array([
    [1.0, 0, 0, 0],
    [0, 2, 0, 0],
    [0, 0, 1, 0],
])
COUNTER_B = np.array([
    [2.0, 4, 3, 2],
    [2, 4, 1, 2],
    [0, 0, 0, 0],
    [0, 0, 0, 0],
])
COUNTER_PINV = np.array([
    [-2.0, 3, 0],
    [-4, 6, 0],
    [24, -12, 0],
    [-2, 3, 0],
]) / 48.0
COUNTER_COMMUTATOR = 81.0 * np.array([
    [0.0, -1, 0, 0],
    [1, 0, 0, 0],
    [0, 0, 0, 0],
    [0, 0, 0, 0],
])

GEOM_A = np.array([[1.0, 0, 1], [0, 1, -1]])
GEOM_B = np.array([[1.0, 0], [0, 1], [2, 3]])

C123_A = np.array([[1.0, 0], [0, 0]])
C123_B = np.array([[1.0, 1, 0], [0, 1, 1]])
C123_PINV_AB = np.array([[1.0, 0], [1, 0], [0, 0]]) / 2.0
C123_PINV_B_PINV_A = np.array([[2.0, 0], [1, 0], [-1, 0]]) / 3.0

ZERO_A = np.array([[1.0, 0, 1], [0, -1, 0]])
ZERO_B = np.array([[1.0], [0], [-1]])
ZERO_VA = np.array([[1.0, 0, 1], [0, np.sqrt(2.0), 0], [1, 0, -1]]) / np.sqrt(2.0)
ZERO_UB = np.array([[1.0, 0, 1], [0, np.sqrt(2.0), 0], [-1, 0, 1]]) / np.sqrt(2.0)

SAMPLE_DIMS = (40, 21, 30)
SAMPLE_RANKS = (6, 8)
SAMPLE_N = 3


@dataclass(frozen=True)
class FixtureResult:
    name: str
    passed: bool
    residual: float
    detail: str = ""

    def row(self):
        flag = "PASS" if self.passed else "FAIL"
        return f"{flag}  {self.name:<28s} residual={self.residual:.3e}  {self.detail}"


def _f(M, field):
    return as_matrix(M, COMPLEX if field == COMPLEX else REAL)


def columns_match_up_to_phase(V, W, tol):
    """max over columns of 1 - |<v_j, w_j>| (0 when V and W agree column-wise up to unit scalars)."""
    if V.shape[1] == 0:
        return 0.0
    return float(np.max(1.0 - np.abs(np.sum(np.conj(V) * W, axis=0))))


def fixture_intro(tol, angle_tol, field):
    f = full_report(_f(INTRO_A, field), _f(INTRO_B, field), tol, angle_tol)
    res = f.rol.rol_residual
    ok = abs(res - 0.5) <= 1e-12 and not any(f.twelve.values()) and not f.rol.rol_holds
    return FixtureResult("intro_rol_fails", ok, abs(res - 0.5), f"rol_residual={res:.17g}")


def fixture_counterexample(tol, angle_tol, field):
    A, B = _f(COUNTER_A, field), _f(COUNTER_B, field)
    f = full_report(A, B, tol, angle_tol)
    pAB = pinv(A @ B)
    X = pinv(B) @ pinv(A)
    comm = adjoint(A) @ A @ B @ adjoint(B) - B @ adjoint(B) @ adjoint(A) @ A
    res = max(
        fro_norm(pAB - X),
        float(np.max(np.abs(pAB - COUNTER_PINV))),
        float(np.max(np.abs(X - COUNTER_PINV))),
        fro_norm(comm - COUNTER_COMMUTATOR),
    )
    ranks = (compute_svd(A).rank, compute_svd(B).rank)
    ok = (
        res <= 1e-10
        and ranks == (3, 2)
        and fro_norm(A @ B) > 0
        and f.rol.penrose_class.label == "{1,2,3,4}"
        and f.consistent()
    )
    return FixtureResult("counterexample_rol_holds", ok, res, f"ranks={ranks}")


def fixture_geometric(tol, angle_tol, field):
    f = full_report(_f(GEOM_A, field), _f(GEOM_B, field), tol, angle_tol)
    ang = f.rol.angles.angles
    res = float(np.max(np.abs(ang - np.array([0.0, np.pi / 2])))) if len(ang) == 2 else np.inf
    ok = (
        res <= 1e-10
        and f.rol.penrose_class.label == "{1,2}"
        and all(f.twelve.values())
        and not f.rol.proj_test.holds
        and not (f.classes.is123 or f.classes.is124)
    )
    return FixtureResult("geometric_12_only", ok, res, f"class={f.rol.penrose_class.label}")


def fixture_123(tol, angle_tol, field):
    A, B = _f(C123_A, field), _f(C123_B, field)
    res = max(
        float(np.max(np.abs(pinv(A @ B) - C123_PINV_AB))),
        float(np.max(np.abs(pinv(B) @ pinv(A) - C123_PINV_B_PINV_A))),
    )
    c = classify_123_124(A, B, tol)
    ok = (
        res <= 1e-12
        and c.penrose_class.label == "{1,2,3}"
        and c.is123
        and not c.is124
        and len(set(c.criteria_123.values())) == 1
        and c.agree
    )
    return FixtureResult("inverse_123_only", ok, res, f"class={c.penrose_class.label}")


def fixture_zero_product(tol, angle_tol, field):
    A, B = _f(ZERO_A, field), _f(ZERO_B, field)
    X = pinv(B) @ pinv(A)
    al = aligned_svds(A, B, tol)
    left, right, eq = svd_span_spaces(A, B, al.svd_A, al.svd_B, tol)
    res = max(
        fro_norm(pinv(A @ B)),
        fro_norm(X),
        columns_match_up_to_phase(al.svd_A.V, _f(ZERO_VA, field), tol),
        columns_match_up_to_phase(al.svd_B.U[:, :1], _f(ZERO_UB, field)[:, :1], tol),
    )
    ok = res <= 1e-12 and eq and left.dim == 0 and right.dim == 0
    return FixtureResult("zero_product_spans", ok, res, f"span dims=({left.dim},{right.dim})")


def fixture_rank_factorization(tol, angle_tol, field, seed=0):
    rng = np.random.default_rng(seed)
    r = 3
    S = random_rank_matrix(5, r, r, rng, field)
    T = random_rank_matrix(r, 4, r, rng, field)
    f = full_report(S, T, tol, angle_tol)
    al = aligned_svds(S, T, tol)
    left, right, eq = svd_span_spaces(S, T, al.svd_A, al.svd_B, tol)
    plain = svd_span_spaces(S, T, compute_svd(S), compute_svd(T), tol)
    ok = f.rol.rol_holds and f.consistent() and eq and left.dim == r and plain[2] and plain[0].dim == r
    return FixtureResult("rank_factorization", ok, f.rol.rol_residual, f"span dim={left.dim}")


def fixture_identity_family(tol, angle_tol, field, seed=0):
    I = _f(np.eye(2), field)
    base = compute_svd(I)
    rng = np.random.default_rng(seed)
    res = 0.0
    Vs = []
    for _ in range(3):
        s = random_reparametrization(base, rng)
        res = max(res, fro_norm(s.reconstruct() - I), fro_norm(s.U - s.V))
        Vs.append(s.V)
    distinct = fro_norm(Vs[0] - Vs[1]) > 1e-6 and fro_norm(Vs[1] - Vs[2]) > 1e-6
    return FixtureResult("identity_svd_family", res <= 1e-12 and distinct, res, "I = Q I Q*")


def fixture_partner_of_counter(tol, angle_tol, field, seed=0):
    A = _f(COUNTER_A, field)
    plan = ConstructionPlan(J_size=1, extra_null_dirs=1, target_cols_k=4, seed=seed, field=field)
    B = construct_partner(A, plan)
    f = full_report(A, B, tol, angle_tol)
    ok = f.rol.rol_holds and f.consistent() and compute_svd(B).rank == 2 and B.shape == (4, 4)
    return FixtureResult("partner_of_counterexample", ok, f.rol.rol_residual, f"rank_AB={f.rol.rank_AB}")


def fixture_sample_rol(tol, angle_tol, field, seed=1):
    A, B = construct_pair_rol(SAMPLE_DIMS, SAMPLE_RANKS, SAMPLE_N, seed, field)
    f = full_report(A, B, tol, angle_tol)
    ok = f.rol.rol_holds and f.consistent() and f.rol.rank_AB == SAMPLE_N
    return FixtureResult("sample_full_rol", ok, f.rol.rol_residual, f"rank_AB={f.rol.rank_AB}")


def fixture_sample_12(tol, angle_tol, field, seed=1):
    A, B = construct_pair_12(SAMPLE_DIMS, SAMPLE_RANKS, SAMPLE_N, seed, field)
    f = full_report(A, B, tol, angle_tol)
    ok = (
        f.rol.penrose_class.label == "{1,2}"
        and f.rol.rol_residual > tol
        and f.consistent()
        and f.rol.rank_AB == SAMPLE_N
    )
    return FixtureResult("sample_12_rol", ok, f.rol.rol_residual, f"class={f.rol.penrose_class.label}")


def fixture_sample_123(tol, angle_tol, field, seed=1):
    A, B = construct_pair_123(SAMPLE_DIMS, SAMPLE_RANKS, SAMPLE_N, seed, field)
    c = classify_123_124(A, B, tol)
    XAB = pinv(B) @ pinv(A) @ A @ B
    herm = fro_norm(XAB - adjoint(XAB))
    ok = c.is123 and not c.is124 and c.agree and herm > tol
    return FixtureResult("sample_123_rol", ok, herm, "||XAB - (XAB)*||")


def fixture_not_for_any(tol, angle_tol, field, seed=0):
    res, ok, detail = not_for_any_demo(tol, field, seed)
    return FixtureResult("svd_choice_matters", ok, res, detail)


def not_for_any_demo(tol=1e-8, field=REAL, seed=0, dims=(3, 5), rank=2):
    """Span equality for a rank-deficient A and a unitary B = Q under two SVDs of Q.

    A generic unitary U_B yields the factorization ``Q = U_B I (Q* U_B)*`` whose left
    span is all of K^n, while aligned_svds produces one with span range(A*).
    Returns ``(residual, ok, detail)``: ok means the generic SVD violates the
    equality and the aligned one satisfies it.
    """
    rng = np.random.default_rng(seed)
    m, n = dims
    A = random_rank_matrix(m, n, rank, rng, field)
    Q = random_unitary(n, rng, field)
    UB = random_unitary(n, rng, field)
    generic = SvdFactors(U=UB, sigma=np.ones(n), V=adjoint(Q) @ UB)
    svdA = compute_svd(A)
    left_g, right_g, eq_g = svd_span_spaces(A, Q, svdA, generic, tol)
    al = aligned_svds(A, Q, tol)
    left_a, right_a, eq_a = svd_span_spaces(A, Q, al.svd_A, al.svd_B, tol)
    rngAs = Subspace(svdA.V[:, :svdA.rank])
    res = fro_norm(generic.reconstruct() - Q)
    ok = (
        res <= 1e-12
        and not eq_g
        and left_g.dim == n
        and eq_a
        and subspace_eq(left_a, rngAs, tol)
    )
    detail = f"generic span dim={left_g.dim}, aligned span dim={left_a.dim}, rank A={svdA.rank}"
    return res, ok, detail


def fixture_derived(tol, angle_tol, field):
    res = max(derived_rols_check(_f(COUNTER_A, field), _f(COUNTER_B, field), tol).values())
    return FixtureResult("counterexample_derived_rols", res <= 1e-9, res, "13 identities")


FIXTURES = (
    fixture_intro,
    fixture_counterexample,
    fixture_derived,
    fixture_geometric,
    fixture_123,
    fixture_zero_product,
    fixture_rank_factorization,
    fixture_identity_family,
    fixture_partner_of_counter,
    fixture_sample_rol,
    fixture_sample_12,
    fixture_sample_123,
    fixture_not_for_any,
)


def run_fixtures(tol=1e-8, angle_tol=DEFAULT_ANGLE_TOL, field=REAL):
    return [fx(tol, angle_tol, field) for fx in FIXTURES]
