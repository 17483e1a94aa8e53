"""End-to-end acceptance suite.

Each test prints one ``[PASS]``/``[FAIL]`` line and the lines are repeated in
the pytest terminal summary. Run alone with ``pytest tests/test_acceptance.py -s``.
"""

import json
import time

import conftest
import numpy as np
import pytest
from conftest import UNIT_WEIGHT, random_config

from kramers_lab import (
    ExpNegT,
    GridSpec,
    IndicatorBelow,
    Involution,
    ResolventShift,
    algebra_closure_test,
    build_field_operators,
    build_HN_toy,
    build_HP,
    build_HPF_grid,
    build_modes,
    check_commutes,
    cluster,
    diagonalize,
    enumerate_basis,
    jreal_generalization_check,
    kramers_report,
    make_theta,
    theta_for,
    theta_function_commutes,
    vacuum_expectation_check,
)
from kramers_lab.cli import RunConfig, run
from kramers_lab.semigroup import semigroup_law_residual

COMMUTE_TOL = 1e-12
PAIRING_TOL = 1e-9
PARTNER_TOL = 1e-8
GAP = 1e-8
FUNC_TOL = 1e-10


def record(number: int, title: str, ok: bool, detail: str) -> None:
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {title} ({detail})"
    conftest.ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def twenty_configs():
    rng = np.random.default_rng(2024)
    return [random_config(rng) for _ in range(20)]


def five_configs():
    rng = np.random.default_rng(77)
    return [random_config(rng, M_choices=(2, 3), N_choices=(2, 3)) for _ in range(5)]


def kramers_ok(rep, pairing_tol=PAIRING_TOL, partner_tol=PARTNER_TOL):
    return (rep.asserted and rep.all_even and rep.max_pairing <= pairing_tol
            and rep.max_partner_residual <= partner_tol)


def test_criterion_1_theta_commutation():
    t0 = time.perf_counter()
    worst = 0.0
    for basis, modes, P, e in twenty_configs():
        H = build_HP(basis, modes, P, e)
        worst = max(worst, check_commutes(H, theta_for(H)))
    elapsed = time.perf_counter() - t0
    record(1, "theta commutes with H(P) on 20 random configurations",
           worst <= COMMUTE_TOL and elapsed < 10.0,
           f"max residual {worst:.2e} <= {COMMUTE_TOL:g}, {elapsed:.2f} s < 10 s")


def test_criterion_2_kramers_evenness():
    t0 = time.perf_counter()
    reps = []
    for basis, modes, P, e in twenty_configs():
        H = build_HP(basis, modes, P, e)
        assert H.dim <= 40
        reps.append(kramers_report(H, theta_for(H), GAP, spectrum=diagonalize(H, method="dense")))
    small_time = time.perf_counter() - t0
    small_ok = all(kramers_ok(r) for r in reps) and small_time < 60.0

    t1 = time.perf_counter()
    rng = np.random.default_rng(5)
    from conftest import random_modes

    modes = random_modes(rng, 4)
    basis = enumerate_basis(4, 10)
    H = build_HP(basis, modes, (0.2, -0.1, 0.4), 0.6)
    big = kramers_report(H, theta_for(H), GAP, spectrum=diagonalize(H, method="dense"))
    big_time = time.perf_counter() - t1
    big_ok = kramers_ok(big) and big_time < 300.0

    pair = max(max(r.max_pairing for r in reps), big.max_pairing)
    part = max(max(r.max_partner_residual for r in reps), big.max_partner_residual)
    record(2, "Kramers evenness, pairing and eigenspace closure", small_ok and big_ok,
           f"20 points even in {small_time:.2f} s; dim {H.dim} point even in {big_time:.1f} s; "
           f"max pairing {pair:.1e}, max partner residual {part:.1e}")


def test_criterion_3_grid_hamiltonian():
    modes = build_modes([((0.3, 0.2, 1.0), UNIT_WEIGHT)]).take(1)
    basis = enumerate_basis(1, 2)
    grid = GridSpec.symmetric(4, 0.5)
    H = build_HPF_grid(basis, modes, grid, lambda x: x * x, e=0.3)
    theta = theta_for(H, grid_size=grid.size)
    comm = check_commutes(H, theta)
    rep = kramers_report(H, theta, GAP)
    with pytest.warns(UserWarning, match="not even"):
        H_odd = build_HPF_grid(basis, modes, grid, lambda x: x, e=0.3)
    odd = kramers_report(H_odd, theta, GAP)
    ok = (comm <= COMMUTE_TOL and kramers_ok(rep)
          and odd.commutator_residual > 1e-2 and not odd.asserted and odd.passed is None)
    record(3, "grid Hamiltonian with even V passes, odd V withheld", ok,
           f"dim {H.dim}, residual {comm:.1e}, multiplicities {sorted(set(rep.multiplicities))}; "
           f"odd V residual {odd.commutator_residual:.2f}, asserted={odd.asserted}")


def test_criterion_4_nspin_sign():
    signs_ok = True
    for N in (1, 2, 3, 4):
        th = make_theta(Involution.conjugation(3), N)
        sq = th.square().toarray()
        expected = -1 if N % 2 else 1
        signs_ok &= th.sign == expected
        signs_ok &= float(np.abs(sq - expected * np.eye(sq.shape[0])).max()) <= 1e-12

    single = build_modes([((0.3, 0.2, 1.0), UNIT_WEIGHT)]).take(1)
    basis1 = enumerate_basis(1, 2)
    H3 = build_HN_toy(basis1, single, 3, 0.4)
    rep3 = kramers_report(H3, theta_for(H3, spin_factors=3), GAP)
    odd_ok = H3.dim == 24 and kramers_ok(rep3)

    # two non-collinear single-polarization modes; a single mode keeps an extra symmetry
    two = build_modes([((0, 0, 1.0), UNIT_WEIGHT), ((1.0, 0, 0), UNIT_WEIGHT)], (1,))
    H2 = build_HN_toy(enumerate_basis(2, 2), two, 2, 0.4)
    rep2 = kramers_report(H2, theta_for(H2, spin_factors=2), GAP)
    n_odd = sum(c.multiplicity % 2 for c in rep2.clusters)
    even_ok = not rep2.asserted and n_odd > 0
    record(4, "theta^2 = (-1)^N; N=3 even; N=2 shows odd clusters",
           bool(signs_ok and odd_ok and even_ok),
           f"signs exact; N=3 dim {H3.dim} multiplicities {sorted(set(rep3.multiplicities))}; "
           f"N=2 has {n_odd} odd clusters")


def _ground_threshold(vals):
    cl = cluster(vals, GAP)
    return cl[0].mean + 0.5 * (cl[1].mean - cl[0].mean), cl[0].multiplicity


def test_criterion_5_functional_calculus():
    worst = 0.0
    trace_ok = True
    for basis, modes, P, e in five_configs():
        H = build_HP(basis, modes, P, e)
        theta = theta_for(H)
        spec = diagonalize(H)
        lam = spec.eigenvalues
        thr, mult = _ground_threshold(lam)
        for f in (ExpNegT(1.0), ResolventShift(1.0 - lam[0]), IndicatorBelow(thr)):
            worst = max(worst, theta_function_commutes(H, theta, f, spectrum=spec))
        from kramers_lab import apply_function

        tr = np.trace(apply_function(H, IndicatorBelow(thr), spectrum=spec).matrix).real
        trace_ok &= abs(tr - mult) <= 1e-10
    record(5, "f(H) commutes with theta for exp, resolvent, ground indicator",
           worst <= FUNC_TOL and trace_ok, f"max residual {worst:.1e} <= {FUNC_TOL:g}")


def test_criterion_6_vacuum_expectation():
    worst_hs = 0.0
    worst_spinor = 0.0
    worst_jreal = 0.0
    for i, (basis, modes, P, e) in enumerate(five_configs()):
        H = build_HP(basis, modes, P, e)
        spec = diagonalize(H)
        for t in (0.1, 1.0, 10.0):
            r = vacuum_expectation_check(H, basis, t, seed=i, samples=10, spectrum=spec)
            worst_hs = max(worst_hs, r.offdiag, r.diag_gap)
            worst_spinor = max(worst_spinor, r.max_spinor_gap)
        theta = theta_for(H)
        rng = np.random.default_rng(100 + i)
        D = basis.dim
        two = np.zeros(D)
        if D > 2:
            two[[0, 2]] = 1 / np.sqrt(2)
        else:
            two[:] = 1 / np.sqrt(D)
        rand = rng.standard_normal(D)
        phis = [basis.vacuum().real, two, rand / np.linalg.norm(rand)]
        lam0 = spec.eigenvalues[0]
        thr, _ = _ground_threshold(spec.eigenvalues)
        for phi in phis:
            for f in (ExpNegT(1.0), ResolventShift(1.0 - lam0), IndicatorBelow(thr)):
                jr = jreal_generalization_check(H, theta, f, phi, seed=i, spectrum=spec)
                worst_jreal = max(worst_jreal, jr.gap_up, jr.gap_down)
    ok = worst_hs <= 1e-12 and worst_spinor <= FUNC_TOL and worst_jreal <= FUNC_TOL
    record(6, "vacuum expectations are spin independent", ok,
           f"offdiag/diag gap {worst_hs:.1e} <= 1e-12, spinor {worst_spinor:.1e}, "
           f"j-real phi {worst_jreal:.1e} <= {FUNC_TOL:g}")


def test_criterion_7_structural_algebra():
    rng = np.random.default_rng(31)
    basis, modes, _, _ = random_config(rng, M_choices=(3,), N_choices=(3,))
    f = build_field_operators(basis, modes)
    j = Involution.conjugation(basis.dim)
    P = j.matrix()

    def exact(a, sign=1):
        a = a.tocsr()
        return (a @ P - sign * P @ a.conj()).count_nonzero() == 0

    rel_ok = (all(exact(a) for a in (*f.a, *f.adag, *f.A0, f.Hf, *f.Pf))
              and all(exact(B, -1) for B in f.B0))
    members = [*f.a, *f.adag, *f.A0, f.Hf, *f.Pf, *(1j * B for B in f.B0)]
    worst = 0.0
    for _ in range(10):
        ia, ib = rng.integers(len(members), size=2)
        alpha, beta = rng.uniform(-3, 3, size=2)
        r = algebra_closure_test(members[ia], members[ib], alpha, beta, j)
        worst = max(worst, r.combination_residual, r.product_residual)
    record(7, "exact j-relations and real closure", rel_ok and worst <= 1e-12,
           f"relations exact={rel_ok}, closure residual {worst:.1e} over 10 pairs")


def test_criterion_8_oracle_equivalence():
    from conftest import random_modes

    rng = np.random.default_rng(8)
    modes = random_modes(rng, 3)
    basis = enumerate_basis(3, 19)
    H = build_HP(basis, modes, (0.1, 0.3, -0.2), 0.5)
    it = diagonalize(H, 10, method="iterative", seed=0)
    dense = diagonalize(H, method="dense").eigenvalues[:10]
    err = float(np.abs(it.eigenvalues - dense).max())
    small = build_HP(*five_configs()[0][:3], 0.5)
    law = semigroup_law_residual(small, 0.3, 0.7)
    record(8, "iterative solver matches dense; semigroup law",
           err <= 1e-9 and law <= FUNC_TOL,
           f"dim {H.dim}, lowest-10 max error {err:.1e} <= 1e-9; law residual {law:.1e}")


def test_criterion_9_determinism(tmp_path):
    cfg = RunConfig(
        kpoints=[[0.0, 0.0, 1.0, 496.1], [0.4, -0.3, 0.8, 300.0]],
        N_max=2, P=(0.0, 0.0, 0.3), e=0.5, mode_count=3, seed=11,
        checks=("kramers", "semigroup", "jreal", "algebra", "negative_control"),
    )
    blobs = []
    for name in ("a", "b"):
        run(cfg, tmp_path / name)
        data = json.loads((tmp_path / name / "report.json").read_text())
        data.pop("wall_time")
        blobs.append(json.dumps(data, indent=2, sort_keys=True).encode()
                     + (tmp_path / name / "clusters.csv").read_bytes())
    record(9, "identical reports from identical config and seed", blobs[0] == blobs[1],
           f"{len(blobs[0])} bytes compared")
