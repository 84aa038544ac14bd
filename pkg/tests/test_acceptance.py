"""Acceptance gate: one test per criterion, each recorded as a PASS/FAIL line in the terminal summary."""
import time

import numpy as np

from revorder.errors import PlanInfeasible
from revorder.fixtures import (
    C123_A,
    C123_B,
    C123_PINV_AB,
    C123_PINV_B_PINV_A,
    COUNTER_A,
    COUNTER_B,
    COUNTER_COMMUTATOR,
    COUNTER_PINV,
    GEOM_A,
    GEOM_B,
    INTRO_A,
    INTRO_B,
    not_for_any_demo,
)
from revorder.geninv import penrose_conditions, pinv, pinv_oracle
from revorder.matcore import COMPLEX, REAL, adjoint, fro_norm
from revorder.rolkit import (
    DERIVED_NAMES,
    PRODUCT_RANK_TOL,
    ConstructionPlan,
    classify_123_124,
    classify_pair,
    construct_pair_12,
    construct_pair_123,
    construct_pair_124,
    construct_pair_rol,
    construct_pair_zero,
    construct_partner,
    derived_rols_check,
    random_rank_matrix,
    rol_and_twelve,
    rol_residual,
    twelve_way_suite,
)
from revorder.subgeo import Subspace, principal_angles
from revorder.svdkit import compute_svd, random_reparametrization


def _rank(M, scale=None):
    return compute_svd(M, rank_tol=PRODUCT_RANK_TOL, scale=scale).rank


def test_c01_intro_example(acceptance):
    out = rol_and_twelve(INTRO_A, INTRO_B)
    times = []
    for _ in range(300):
        t0 = time.perf_counter()
        rol_and_twelve(INTRO_A, INTRO_B)
        times.append(time.perf_counter() - t0)
    median_ms = 1e3 * float(np.median(times))
    ok_values = (
        abs(out["pinv_AB"][0, 0] - 1.0) <= 1e-12
        and abs(out["pinv_B_pinv_A"][0, 0] - 0.5) <= 1e-12
        and abs(out["rol_residual"] - 0.5) <= 1e-12
    )
    all_false = not any(out["twelve"].values())
    ok = ok_values and all_false and median_ms < 1.0
    acceptance(1, "intro example", ok,
               f"residual={out['rol_residual']:.15g} twelve_any={not all_false} median={median_ms:.3f}ms")
    assert ok_values
    assert all_false, out["twelve"]
    assert median_ms < 1.0


def test_c02_counterexample(acceptance):
    AB = COUNTER_A @ COUNTER_B
    pAB = pinv(AB)
    X = pinv(COUNTER_B) @ pinv(COUNTER_A)
    diff = fro_norm(pAB - X)
    err_pAB = float(np.max(np.abs(pAB - COUNTER_PINV)))
    err_X = float(np.max(np.abs(X - COUNTER_PINV)))
    comm = adjoint(COUNTER_A) @ COUNTER_A @ COUNTER_B @ adjoint(COUNTER_B)
    comm = comm - COUNTER_B @ adjoint(COUNTER_B) @ adjoint(COUNTER_A) @ COUNTER_A
    err_comm = fro_norm(comm - COUNTER_COMMUTATOR)
    ranks = (compute_svd(COUNTER_A).rank, compute_svd(COUNTER_B).rank)
    ok = (
        diff <= 1e-10
        and err_pAB <= 1e-10
        and err_X <= 1e-10
        and err_comm <= 1e-10
        and ranks == (3, 2)
        and fro_norm(AB) > 0
    )
    acceptance(2, "counterexample", ok,
               f"diff={diff:.2e} entry_err={max(err_pAB, err_X):.2e} comm_err={err_comm:.2e} ranks={ranks}")
    assert ok


def _partner_configs(count, seed=2024):
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        m, n, k = (int(x) for x in rng.integers(1, 13, size=3))
        r = int(rng.integers(0, min(m, n) + 1))
        s = int(rng.integers(0, r + 1))
        t = int(rng.integers(0, n - r + 1))
        if s + t > k:
            continue
        field = COMPLEX if len(out) % 2 else REAL
        out.append((m, n, k, r, s, t, field, int(rng.integers(2**31))))
    return out


def test_c03_constructor_soundness(acceptance):
    t0 = time.perf_counter()
    worst = 0.0
    failures = []
    for m, n, k, r, s, t, field, seed in _partner_configs(200):
        A = random_rank_matrix(m, n, r, seed, field)
        B = construct_partner(A, ConstructionPlan(J_size=s, extra_null_dirs=t, target_cols_k=k, seed=seed + 1))
        nA = float(np.linalg.norm(A, 2)) if r else 0.0
        nB = float(np.linalg.norm(B, 2)) if s + t else 0.0
        res = rol_residual(A, B)
        worst = max(worst, res)
        if res > 1e-8 or compute_svd(B).rank != s + t or _rank(A @ B, nA * nB) != s:
            failures.append((m, n, k, r, s, t, field, seed, res))
    elapsed = time.perf_counter() - t0
    ok = not failures and elapsed < 5.0
    acceptance(3, "constructor soundness", ok,
               f"configs=200 failures={len(failures)} worst={worst:.2e} time={elapsed:.2f}s")
    assert not failures, failures[:5]
    assert elapsed < 5.0


def _mixed_pair(i, rng):
    field = COMPLEX if i % 2 else REAL
    kind = ("random", "lowrank", "rol", "12", "123", "124", "zero")[i % 7]
    m, n, k = (int(x) for x in rng.integers(1, 9, size=3))
    rA = int(rng.integers(0, min(m, n) + 1))
    rB = int(rng.integers(0, min(n, k) + 1))
    N = int(rng.integers(0, min(rA, rB) + 1))
    try:
        if kind == "random":
            A = rng.standard_normal((m, n))
            B = rng.standard_normal((n, k))
            if field == COMPLEX:
                A = A + 1j * rng.standard_normal((m, n))
                B = B + 1j * rng.standard_normal((n, k))
            return kind, A, B
        if kind == "lowrank":
            return kind, random_rank_matrix(m, n, rA, rng, field), random_rank_matrix(n, k, rB, rng, field)
        if kind == "zero":
            return (kind, *construct_pair_zero((m, n, k), (rA, rB), rng, field))
        build = {"rol": construct_pair_rol, "12": construct_pair_12,
                 "123": construct_pair_123, "124": construct_pair_124}[kind]
        return (kind, *build((m, n, k), (rA, rB), N, rng, field))
    except PlanInfeasible:
        return "lowrank", random_rank_matrix(m, n, rA, rng, field), random_rank_matrix(n, k, rB, rng, field)


def test_c04_equivalence_closure(acceptance):
    rng = np.random.default_rng(4)
    seven_bad, twelve_bad = [], []
    counts = {}
    for i in range(500):
        kind, A, B = _mixed_pair(i, rng)
        rep = classify_pair(A, B)
        seven = rep.full_rol_predicates()
        twelve = twelve_way_suite(A, B)
        if len(set(seven.values())) != 1:
            seven_bad.append((i, kind, seven))
        if len(set(twelve.values())) != 1:
            twelve_bad.append((i, kind, twelve))
        key = (kind, all(seven.values()), all(twelve.values()))
        counts[key] = counts.get(key, 0) + 1
    ok = not seven_bad and not twelve_bad
    full = sum(v for (k, s, t), v in counts.items() if s)
    only12 = sum(v for (k, s, t), v in counts.items() if t and not s)
    acceptance(4, "equivalence closure", ok,
               f"pairs=500 seven_disagree={len(seven_bad)} twelve_disagree={len(twelve_bad)} "
               f"full_rol={full} only_12={only12}")
    assert not seven_bad, seven_bad[:3]
    assert not twelve_bad, twelve_bad[:3]


def test_c05_geometric_fixture(acceptance):
    rngAs = Subspace(compute_svd(GEOM_A).V[:, :2])
    rngB = Subspace(compute_svd(GEOM_B).U[:, :2])
    angles = principal_angles(rngAs, rngB).angles
    err = float(np.max(np.abs(angles - np.array([0.0, np.pi / 2]))))
    cls = penrose_conditions(GEOM_A @ GEOM_B, pinv(GEOM_B) @ pinv(GEOM_A)).satisfied
    rep_cls = classify_pair(GEOM_A, GEOM_B).penrose_class.satisfied
    ok = err <= 1e-10 and cls == {1, 2} and rep_cls == {1, 2}
    acceptance(5, "geometric fixture", ok, f"angles={[round(float(a), 12) for a in angles]} err={err:.1e} class={sorted(cls)}")
    assert ok


def test_c06_123_fixture(acceptance):
    pAB = pinv(C123_A @ C123_B)
    X = pinv(C123_B) @ pinv(C123_A)
    e1 = float(np.max(np.abs(pAB - C123_PINV_AB)))
    e2 = float(np.max(np.abs(X - C123_PINV_B_PINV_A)))
    cls = penrose_conditions(C123_A @ C123_B, X).satisfied
    rep = classify_123_124(C123_A, C123_B)
    crit = rep.criteria_123
    agree = len(set(crit.values())) == 1 and all(crit.values())
    ok = e1 <= 1e-12 and e2 <= 1e-12 and cls == {1, 2, 3} and agree and rep.agree
    acceptance(6, "{1,2,3} fixture", ok, f"entry_err={max(e1, e2):.1e} class={sorted(cls)} criteria={crit}")
    assert ok


def test_c07_derived_battery(acceptance):
    rng = np.random.default_rng(7)
    worst = {name: 0.0 for name in DERIVED_NAMES}
    done = 0
    while done < 100:
        m, n, k = (int(x) for x in rng.integers(1, 11, size=3))
        rA = int(rng.integers(0, min(m, n) + 1))
        rB = int(rng.integers(0, min(n, k) + 1))
        N = int(rng.integers(0, min(rA, rB) + 1))
        field = COMPLEX if done % 2 else REAL
        try:
            A, B = construct_pair_rol((m, n, k), (rA, rB), N, rng, field)
        except PlanInfeasible:
            continue
        for name, r in derived_rols_check(A, B).items():
            worst[name] = max(worst[name], r)
        done += 1
    top = max(worst.values())
    ok = top <= 1e-8 and len(worst) == 13
    acceptance(7, "derived-identity battery", ok, f"pairs=100 identities={len(worst)} worst={top:.2e}")
    assert ok, worst


def test_c08_oracle_equivalence(acceptance):
    rng = np.random.default_rng(8)
    worst_rel, worst_pen = 0.0, 0.0
    for i in range(200):
        m = int(rng.integers(1, 13))
        n = int(rng.integers(1, 10))
        r = int(rng.integers(0, min(m, n) + 1))
        field = COMPLEX if i % 2 else REAL
        A = random_rank_matrix(m, n, r, rng, field)
        P = pinv(A)
        O = pinv_oracle(A)
        rel = fro_norm(P - O) / max(fro_norm(O), 1.0)
        worst_rel = max(worst_rel, rel)
        worst_pen = max(worst_pen, max(penrose_conditions(A, P).residuals.values()))
    ok = worst_rel <= 1e-9 and worst_pen <= 1e-10
    acceptance(8, "oracle equivalence", ok, f"matrices=200 worst_rel={worst_rel:.2e} worst_penrose={worst_pen:.2e}")
    assert ok


def test_c09_svd_family(acceptance):
    rng = np.random.default_rng(9)
    worst, sigma_same, unitary = 0.0, True, 0.0
    repeated = 0
    for i in range(20):
        m = int(rng.integers(2, 9))
        n = int(rng.integers(2, 9))
        r = int(rng.integers(1, min(m, n) + 1))
        field = COMPLEX if i % 2 else REAL
        sigma = None
        if i % 3 == 0 and r >= 2:
            # force a repeated singular value block
            sigma = np.sort(np.concatenate([[2.0, 2.0], rng.uniform(0.5, 3.0, r - 2)]))[::-1]
            repeated += 1
        A = random_rank_matrix(m, n, r, rng, field, sigma)
        base = compute_svd(A)
        for _ in range(50):
            s = random_reparametrization(base, rng)
            worst = max(worst, fro_norm(s.reconstruct() - A))
            sigma_same &= np.array_equal(s.sigma, base.sigma)
            unitary = max(unitary,
                          fro_norm(adjoint(s.U) @ s.U - np.eye(m)),
                          fro_norm(adjoint(s.V) @ s.V - np.eye(n)))
    ok = worst <= 1e-11 and sigma_same and unitary <= 1e-11
    acceptance(9, "SVD family", ok,
               f"matrices=20 repeated_sigma={repeated} reconstruct={worst:.2e} unitarity={unitary:.2e}")
    assert ok


def test_c10_not_for_any(acceptance):
    results = [not_for_any_demo(seed=s, field=f) for s in range(5) for f in (REAL, COMPLEX)]
    ok = all(r[1] for r in results)
    acceptance(10, "some-but-not-any SVDs", ok, results[0][2])
    assert ok, [r[2] for r in results if not r[1]]
