import numpy as np
import pytest

import oracle
from superint.phase_space import PhasePoint, evaluate, gradient
from superint.systems import (AxisParams, SystemSpec, axis_hamiltonian, hamiltonian,
                              potential_1d, potential_1d_derivative, quartic_residual,
                              quartic_terms)


def test_axis_params_validation():
    for bad in (dict(k=0), dict(k=-1), dict(b=-0.1), dict(epsilon=0), dict(epsilon=2)):
        with pytest.raises(ValueError):
            AxisParams(**bad)
    with pytest.raises(ValueError):
        SystemSpec(0.0, (AxisParams(),))
    with pytest.raises(ValueError):
        SystemSpec(1.0, ())


@pytest.mark.parametrize("w,k,b", [(1.0, 1, 0.5), (3.0, 2, 3.0), (2.0, 3, 5.0)])
def test_potential_at_origin(w, k, b):
    assert potential_1d(0.0, w, AxisParams(k, b)) == pytest.approx(w * w * k * k * b / 9)


@pytest.mark.parametrize("x", [0.3, 1.0, 1.7])
def test_zero_b_reduces_to_oscillator_on_positive_side(x):
    assert potential_1d(x, 2.0, AxisParams(3, 0.0, 1)) == pytest.approx(36.0 * x * x / 2)


def test_zero_b_hamiltonian_harmonic_limit():
    H = hamiltonian(SystemSpec(3.0, (AxisParams(1, 0.0, 1),)))
    assert evaluate(H, PhasePoint([1.0], [0.0])) == pytest.approx(4.5)


def test_fig1_hamiltonian_value(fig1_spec):
    H = hamiltonian(fig1_spec)
    V2 = oracle.at(oracle.potential(9, 5, 1), x=1)
    expected = 0.5 * (1 + 9) + 9.5 + V2.real
    assert evaluate(H, PhasePoint([1.0, 1.0], [1.0, -3.0])) == pytest.approx(expected, rel=1e-14)
    parts = sum(evaluate(axis_hamiltonian(fig1_spec, j), PhasePoint([1.0, 1.0], [1.0, -3.0]))
                for j in range(2))
    assert parts == pytest.approx(expected, rel=1e-14)


@pytest.mark.parametrize("eps", [1, -1])
def test_closed_form_derivative_matches_forward_mode(eps):
    ax = AxisParams(2, 3.0, eps)
    xs = np.linspace(-2, 2, 41)
    H = hamiltonian(SystemSpec(1.5, (ax,)))
    dx, _ = gradient(H, PhasePoint(xs[None, :], np.zeros((1, 41))))
    assert np.allclose(dx[0].real, potential_1d_derivative(xs, 1.5, ax), rtol=1e-13, atol=1e-12)


@pytest.mark.parametrize("w,b", [(1.0, 0.5), (2.0, 1.0), (3.0, 3.0)])
@pytest.mark.parametrize("eps", [1, -1])
def test_quartic_constraint(w, b, eps):
    x = np.linspace(-2, 2, 101)
    v = potential_1d(x, w, AxisParams(1, b, eps))
    terms = quartic_terms(x, v, w, b)
    scaled = np.abs(quartic_residual(x, v, w, b)) / (1 + np.abs(terms[0]))
    assert np.max(scaled) <= 1e-9


def test_quartic_detects_wrong_potential():
    x = np.linspace(0.2, 2, 21)
    v = 1.01 * potential_1d(x, 2.0, AxisParams(1, 1.0))
    terms = quartic_terms(x, v, 2.0, 1.0)
    assert np.max(np.abs(sum(terms)) / (1 + np.abs(terms[0]))) > 1e-4


def test_hamiltonian_is_real_on_real_points(fig1_spec):
    from superint.phase_space import sample_points
    vals = evaluate(hamiltonian(fig1_spec), sample_points(2, 30, seed=2))
    assert np.all(vals.imag == 0)
