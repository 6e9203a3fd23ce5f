"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

The lines are collected in ``RESULTS`` and echoed in the terminal summary
(see ``conftest.pytest_terminal_summary``), so ``pytest -v`` shows them even
with output capture on.
"""

import math
import time

import numpy as np

from superint.algebra import (algebra_relations_2d, check_relation, cubic_algebra_check,
                              fit_bracket_coefficient, jacobian_ranks)
from superint.config import preset
from superint.dynamics import closure_test, integrate, predict_period
from superint.integrals import (build_integrals, build_integrals_nd, cubic_system,
                                momentum_degree, third_order_integral_B)
from superint.ladders import (deformed_ladder, harmonic_ladder, ladder_sample_points,
                              pq_polynomials, system_ladders, verify_ladder)
from superint.phase_space import PhasePoint, bracket, evaluate, sample_points
from superint.report import build_report
from superint.systems import (AxisParams, SystemSpec, axis_hamiltonian, hamiltonian,
                              potential_1d, quartic_terms)

RESULTS = {}


def record(n, ok, detail):
    line = f"criterion {n:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
    RESULTS[n] = line
    print(line)
    return ok


def rel_conservation(H, Z, pts):
    z = evaluate(Z, pts)
    return float(np.max(np.abs(evaluate(bracket(H, Z), pts)) / (1 + np.abs(z))))


def fig(name):
    cfg = preset(name)
    return cfg, PhasePoint(cfg.run.x0, cfg.run.p0)


def test_criterion_01_ladder_relation():
    t0 = time.perf_counter()
    spec = preset("fig1").system
    pts = sample_points(2, 200, seed=0)
    L = system_ladders(spec, "fitted", seed=0)
    res = [verify_ladder(axis_hamiltonian(spec, j), L[j], pts) for j in range(2)]
    hpts = sample_points(1, 200, seed=0)
    hres = max(verify_ladder(axis_hamiltonian(SystemSpec(w, (AxisParams(harmonic=True),)), 0),
                             harmonic_ladder(w), hpts) for w in (1.0, 3.0, 9.0))
    dt = time.perf_counter() - t0
    ok = max(res) <= 1e-8 and hres <= 1e-12 and dt < 5
    assert record(1, ok, f"deformed axes {res[0]:.2e}, {res[1]:.2e} (<=1e-8); harmonic "
                         f"{hres:.2e} (<=1e-12); {dt:.2f}s (<5s)")


def test_criterion_02_factorization():
    spec = preset("fig1").system
    fits = [pq_polynomials(spec.omega, ax, "fitted", seed=0) for ax in spec.axes]
    worst = max(f.residual_Q for f in fits)
    ax0 = AxisParams(1, 0.0, 1)
    L = deformed_ladder(1.0, ax0, half_line=1)
    pts = ladder_sample_points(ax0, 300, seed=1, half_line=1)
    assert np.all(pts.x > 0.1 - 1e-15)
    pq0 = pq_polynomials(1.0, ax0, ladder=L, pts=pts)
    dev = float(np.max(np.abs(pq0.Q - np.array([0, 0, 0, 8]))) / 8)
    ok = worst <= 1e-7 and dev <= 1e-6
    assert record(2, ok, f"cubic Q fit residual {worst:.2e} (<=1e-7); b=0 Q vs 8H^3 "
                         f"coefficient deviation {dev:.2e} (<=1e-6)")


def test_criterion_03_quartic_constraint():
    x = np.linspace(-2, 2, 101)
    worst = 0.0
    for w, b in ((1.0, 0.5), (2.0, 1.0), (3.0, 3.0)):
        for e in (1, -1):
            v = potential_1d(x, w, AxisParams(1, b, e))
            terms = quartic_terms(x, v, w, b)
            worst = max(worst, float(np.max(np.abs(sum(terms)) / (1 + np.abs(terms[0])))))
    assert record(3, worst <= 1e-9, f"max scaled residual {worst:.2e} (<=1e-9)")


def test_criterion_04_integrals_commute():
    spec = preset("fig1").system
    iset = build_integrals(spec, system_ladders(spec), (3, 1))
    H = hamiltonian(spec)
    pts = sample_points(2, 100, seed=0)
    r = {n: rel_conservation(H, Z, pts) for n, Z in (("I1", iset.I1), ("I2", iset.I2),
                                                     ("K", iset.K))}
    ok = max(r.values()) <= 1e-7
    assert record(4, ok, ", ".join(f"{{H,{n}}} {v:.2e}" for n, v in r.items()) + " (<=1e-7)")


def test_criterion_05_polynomial_algebra():
    spec = preset("fig1").system
    iset = build_integrals(spec, system_ladders(spec), (3, 1))
    pq = [pq_polynomials(spec.omega, ax) for ax in spec.axes]
    pts = sample_points(2, 100, seed=0)
    res = [check_relation(rel, pts, 1e-6)[0] for rel in algebra_relations_2d(iset, pq)]
    c = fit_bracket_coefficient(iset.K, iset.I1, iset.I2, pts)
    m1, nu1 = iset.m[0], iset.nus[0]
    # the ladder eigenvalue is lambda_1 = i nu_1, so the structure constant is 2 m1 lambda_1
    expect = 2 * m1 * (1j * nu1)
    cerr = abs(c - expect) / abs(expect)
    ok = max(res) <= 1e-6 and cerr <= 1e-8
    assert record(5, ok, f"relations {max(res):.2e} (<=1e-6); coefficient {c:.10g} vs "
                         f"2 m1 (i nu1) = {expect:.10g}, rel err {cerr:.1e} (<=1e-8)")


def test_criterion_06_cubic_algebra():
    w, b = 3.0, 3.0
    spec = cubic_system(w, b)
    rep = cubic_algebra_check(spec, sample_points(2, 100, seed=7))
    rel = max(abs(rep.fitted[k] - v) / abs(v) for k, v in (("c3", 8), ("c2", 12), ("c1", -4)))
    readings = ", ".join(f"{k} = {v:.6g}" for k, v in rep.alternatives.items())
    ok = rep.residual_AC <= 1e-6 and rel <= 1e-6
    assert record(6, ok, f"{{A,C}} {rep.residual_AC:.2e} (<=1e-6); c3,c2,c1 rel err {rel:.1e} "
                         f"(<=1e-6); fitted cA {rep.fitted['cA']:.6g} [{readings}]; fitted c0 "
                         f"{rep.fitted['c0']:.6g} vs printed {rep.printed['c0']:.6g}")


def test_criterion_07_third_order_integral():
    spec = cubic_system(3.0, 3.0)
    B = third_order_integral_B(spec)
    r = rel_conservation(hamiltonian(spec), B, sample_points(2, 100, seed=0))
    deg = momentum_degree(B)
    assert record(7, r <= 1e-7 and deg == 3, f"{{H,B}} {r:.2e} (<=1e-7); degree {deg} (=3)")


def test_criterion_08_maximal_superintegrability():
    spec = preset("fig1").system
    iset = build_integrals(spec, system_ladders(spec))
    pts = sample_points(2, 100, seed=0)
    r2 = int(np.sum(jacobian_ranks([hamiltonian(spec), iset.K, iset.X1], pts) == 3))
    counts = {}
    for name in ("fig3", "fig4"):
        s3 = preset(name).system
        L = system_ladders(s3)
        pairs = [build_integrals_nd(s3, L, pr) for pr in ((1, 2), (2, 3))]
        obs = [hamiltonian(s3)] + [p.K for p in pairs] + [p.X1 for p in pairs]
        counts[name] = int(np.sum(jacobian_ranks(obs, sample_points(3, 100, seed=0)) == 5))
    ok = r2 >= 95 and min(counts.values()) >= 95
    assert record(8, ok, f"2D rank 3 at {r2}/100; 3D rank 5 at " +
                  ", ".join(f"{k} {v}/100" for k, v in counts.items()) + " (>=95)")


def test_criterion_09_closure():
    t0 = time.perf_counter()
    cfg, init = fig("fig1")
    T_star = 2 * math.pi / 3
    at_star = closure_test(cfg.system, init, 1e-11, 1e-4, period=T_star)
    control = SystemSpec(3.0, (AxisParams(1, 3.0), AxisParams(3 * math.sqrt(2), 5.0)))
    ctrl = closure_test(control, init, 1e-11, 1e-4, period=T_star)
    # measured recurrence, reported for context, not part of the verdict
    T_obs = predict_period(cfg.system)
    at_obs = closure_test(cfg.system, init, 1e-11, 1e-4)
    dt = time.perf_counter() - t0
    ok = at_star.return_distance <= 1e-4 and not ctrl.closed and dt < 30
    assert record(9, ok, f"return distance at T*=2pi/3: {at_star.return_distance:.3e} (<=1e-4); "
                         f"control closed={ctrl.closed} (want False); {dt:.2f}s (<30s) "
                         f"[at 4pi/3 = {T_obs:.6f}: {at_obs.return_distance:.2e}]")


def test_criterion_10_conservation():
    parts = []
    ok = True
    for name in ("fig1", "fig2", "fig3", "fig4"):
        cfg, init = fig(name)
        spec = cfg.system
        L = system_ladders(spec)
        if spec.N == 2:
            iset = build_integrals(spec, L)
            mons = {"K": iset.K, "X1": iset.X1, "X2": iset.X2}
        else:
            mons = {f"K{i}{j}": build_integrals_nd(spec, L, (i, j)).K
                    for i, j in ((1, 2), (1, 3), (2, 3))}
        traj = integrate(spec, init, (0, 20), 1e-10, monitors=mons)
        worst = max(traj.drift(k) for k in traj.monitors)
        ok = ok and worst <= 1e-6
        parts.append(f"{name} {worst:.1e}")
    assert record(10, ok, "max relative drift " + ", ".join(parts) + " (<=1e-6)")


def test_criterion_11_degree_accounting():
    spec = preset("fig1").system
    f31 = build_integrals(spec, system_ladders(spec), (3, 1)).f1
    equal = SystemSpec(3.0, (AxisParams(1, 3.0), AxisParams(1, 5.0)))
    f11 = build_integrals(equal, system_ladders(equal), (1, 1)).f1
    d31, d11 = momentum_degree(f31), momentum_degree(f11)
    report = build_report(preset("fig1"))
    flagged = "printed 3^(m1+m2)-form" in report and "reported, not asserted" in report
    ok = d31 == 12 and d11 == 6 and flagged
    assert record(11, ok, f"deg f1 m=(3,1): {d31} (=12), m=(1,1): {d11} (=6); exponential "
                          f"form flagged in report: {flagged}")

