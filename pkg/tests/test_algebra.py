import numpy as np
import pytest

from superint.algebra import (AlgebraRelation, algebra_relations_2d, check_relation,
                              cubic_algebra_check, fit_bracket_coefficient, jacobian_ranks)
from superint.integrals import build_integrals, build_integrals_nd, cubic_system
from superint.ladders import pq_polynomials, system_ladders
from superint.phase_space import Observable, coordinate, momentum, sample_points
from superint.systems import AxisParams, SystemSpec, hamiltonian


@pytest.fixture(scope="module")
def fig1_algebra(fig1_spec):
    iset = build_integrals(fig1_spec, system_ladders(fig1_spec), (3, 1))
    pq = [pq_polynomials(fig1_spec.omega, ax) for ax in fig1_spec.axes]
    return iset, pq, sample_points(2, 100, seed=0)


def test_trivial_relations():
    pts = sample_points(1, 20, seed=1)
    one = Observable(lambda x, p: 1.0, 1, "1")
    r, ok = check_relation(AlgebraRelation((coordinate(0, 1), momentum(0, 1)), one,
                                           "{x,p}=1"), pts, 1e-15)
    assert r == 0 and ok
    H = hamiltonian(SystemSpec(1.0, (AxisParams(1, 2.0),)))
    zero = Observable(lambda x, p: 0.0, 1, "0")
    r, ok = check_relation(AlgebraRelation((H, H), zero, "{H,H}=0"), pts, 1e-12)
    assert ok


def test_fig1_polynomial_algebra(fig1_algebra):
    iset, pq, pts = fig1_algebra
    for rel in algebra_relations_2d(iset, pq):
        r, ok = check_relation(rel, pts, 1e-6)
        assert ok, (rel.label, r)


def test_structure_constant_is_imaginary(fig1_algebra):
    iset, _, pts = fig1_algebra
    c = fit_bracket_coefficient(iset.K, iset.I1, iset.I2, pts)
    # 2 m1 lambda_1 with lambda_1 = i nu_1 = 3i and m1 = 3
    assert c == pytest.approx(18j, abs=1e-8)


def test_sign_flip_breaks_relation(fig1_algebra):
    iset, _, pts = fig1_algebra
    wrong = AlgebraRelation((iset.K, iset.I1), -2 * iset.lam * iset.I2, "flipped")
    r, ok = check_relation(wrong, pts, 1e-6)
    assert not ok and r > 1e-2


@pytest.mark.parametrize("w,b", [(3.0, 3.0), (2.0, 1.0), (1.0, 0.5)])
def test_cubic_algebra(w, b):
    spec = cubic_system(w, b)
    rep = cubic_algebra_check(spec, sample_points(2, 100, seed=7))
    assert rep.residual_AC <= 1e-6
    for key, ref in (("c3", 8), ("c2", 12), ("c1", -4)):
        assert rep.fitted[key] == pytest.approx(ref, rel=1e-6)
    assert rep.fitted["cA"] == pytest.approx(-4 * b**2 * w**4 / 27, rel=1e-6)
    assert rep.fitted["c0"] == pytest.approx(4 * b**3 * w**6 / 729, rel=1e-6)


def test_cubic_algebra_reports_both_readings():
    rep = cubic_algebra_check(cubic_system(2.0, 1.0), sample_points(2, 100, seed=7))
    vals = sorted(rep.alternatives.values())
    assert vals == pytest.approx([-16 * 16 / 27, -4 * 16 / 27])
    assert any("cA" in line for line in rep.lines())


def test_cubic_algebra_zero_b():
    spec = cubic_system(1.5, 0.0)
    pts = sample_points(2, 100, seed=3, exclude_near_zero=spec.smooth_exclusions())
    rep = cubic_algebra_check(spec, pts)
    assert abs(rep.fitted["cA"]) < 1e-6 and abs(rep.fitted["c0"]) < 1e-6


def test_jacobian_rank_2d(fig1_algebra, fig1_spec):
    iset, _, pts = fig1_algebra
    ranks = jacobian_ranks([hamiltonian(fig1_spec), iset.K, iset.X1], pts)
    assert np.mean(ranks == 3) >= 0.95


def test_jacobian_rank_detects_dependence(fig1_algebra, fig1_spec):
    iset, _, pts = fig1_algebra
    H = hamiltonian(fig1_spec)
    ranks = jacobian_ranks([H, iset.K, (H * H + 3 * iset.K).renamed("dep")], pts)
    assert np.all(ranks == 2)


def test_jacobian_rank_3d():
    spec = SystemSpec(3.0, (AxisParams(7, 3.0), AxisParams(11, 5.0), AxisParams(4, 7.0)))
    L = system_ladders(spec)
    pairs = [build_integrals_nd(spec, L, pr) for pr in ((1, 2), (2, 3))]
    obs = [hamiltonian(spec)] + [p.K for p in pairs] + [p.X1 for p in pairs]
    ranks = jacobian_ranks(obs, sample_points(3, 100, seed=0))
    assert np.mean(ranks == 5) >= 0.95
