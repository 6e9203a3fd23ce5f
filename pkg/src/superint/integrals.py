"""Integrals of motion built from products of axis ladder operators.

For commensurate exponents ``m1 nu1 = m2 nu2`` the products
``f1 = (A1+)^m1 (A2-)^m2`` and ``f2 = conj(f1)`` commute with ``H``, as do
``I1 = f1 - f2``, ``I2 = f1 + f2`` and ``K = H1 - H2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from . import dual
from .ladders import LadderOperator
from .phase_space import Observable, PhasePoint, evaluate
from .systems import AxisParams, SystemSpec, axis_hamiltonian, potential_1d

__all__ = [
    "IncommensurateError",
    "NotPolynomialError",
    "IntegralSet",
    "PairIntegrals",
    "commensurate",
    "minimal_exponents",
    "build_integrals",
    "build_integrals_nd",
    "third_order_integral_B",
    "cubic_system",
    "momentum_degree",
]


class IncommensurateError(ValueError):
    pass


class NotPolynomialError(ValueError):
    pass


def commensurate(m1: int, m2: int, nu1: float, nu2: float) -> bool:
    if m1 < 1 or m2 < 1:
        raise ValueError("exponents must be positive integers")
    return abs(m1 * nu1 - m2 * nu2) <= 1e-12 * max(nu1, nu2)


def minimal_exponents(k1: int, k2: int) -> Tuple[int, int]:
    """Smallest ``(m1, m2)`` with ``m1 k1 = m2 k2``."""
    if k1 < 1 or k2 < 1 or int(k1) != k1 or int(k2) != k2:
        raise ValueError("k1, k2 must be positive integers")
    g = math.gcd(int(k1), int(k2))
    return int(k2) // g, int(k1) // g


@dataclass(frozen=True)
class IntegralSet:
    K: Observable
    f1: Observable
    f2: Observable
    I1: Observable
    I2: Observable
    X1: Observable
    X2: Observable
    m: Tuple[int, int]
    nus: Tuple[float, float]
    axis_hamiltonians: Tuple[Observable, Observable]

    @property
    def lam(self) -> complex:
        """Common eigenvalue ``i m1 nu1`` of the two ladder products."""
        return 1j * self.m[0] * self.nus[0]

    def members(self) -> dict:
        return {"K": self.K, "I1": self.I1, "I2": self.I2, "X1": self.X1, "X2": self.X2}


def _products(L1: LadderOperator, L2: LadderOperator, m1: int, m2: int):
    a1, a2 = L1.op, L2.op
    o1, o2 = L1.order * m1, L2.order * m2

    def f1(x, p):
        return a1.fn(x, p) ** m1 * dual.conj(a2.fn(x, p)) ** m2

    def f2(x, p):
        return dual.conj(a1.fn(x, p)) ** m1 * a2.fn(x, p) ** m2

    dim = a1.dim
    return (Observable(f1, dim, "f1", o1 + o2), Observable(f2, dim, "f2", o1 + o2))


def _pair(spec: SystemSpec, ladders: Sequence[LadderOperator], i: int, j: int,
          m: Optional[Tuple[int, int]]):
    Li, Lj = ladders[i], ladders[j]
    if m is None:
        ki, kj = spec.axes[i].k, spec.axes[j].k
        m = minimal_exponents(ki, kj)
    mi, mj = int(m[0]), int(m[1])
    if not commensurate(mi, mj, Li.nu, Lj.nu):
        raise IncommensurateError(
            f"m=({mi},{mj}) with nu=({Li.nu:g},{Lj.nu:g}) is not commensurate")
    f1, f2 = _products(Li, Lj, mi, mj)
    Hi, Hj = axis_hamiltonian(spec, i), axis_hamiltonian(spec, j)
    K = (Hi - Hj).renamed(f"K{i + 1}{j + 1}", 2)
    return (mi, mj), f1, f2, K, Hi, Hj


def build_integrals(spec: SystemSpec, ladders: Sequence[LadderOperator],
                    m: Optional[Tuple[int, int]] = None) -> IntegralSet:
    """``K, f1, f2, I1, I2, X1 = Re f1, X2 = Im f1`` for a 2D system.

    ``m`` defaults to the minimal commensurate exponents of the ``k``s.
    """
    if spec.N != 2:
        raise ValueError("build_integrals needs a 2D system; use build_integrals_nd")
    m, f1, f2, K, H1, H2 = _pair(spec, ladders, 0, 1, m)
    deg = f1.momentum_degree_hint
    I1 = (f1 - f2).renamed("I1", deg)
    I2 = (f1 + f2).renamed("I2", deg)
    return IntegralSet(K.renamed("K", 2), f1, f2, I1, I2, f1.real.renamed("X1"),
                       f1.imag.renamed("X2"), m, (ladders[0].nu, ladders[1].nu), (H1, H2))


@dataclass(frozen=True)
class PairIntegrals:
    """``I_ij``, ``J_ij``, ``K_ij`` for axes ``i < j`` (1-based ``pair``)."""

    I: Observable
    J: Observable
    K: Observable
    X1: Observable
    X2: Observable
    pair: Tuple[int, int]
    m: Tuple[int, int]

    def __iter__(self):
        return iter((self.I, self.J, self.K))


def build_integrals_nd(spec: SystemSpec, ladders: Sequence[LadderOperator],
                       pair: Tuple[int, int], m: Optional[Tuple[int, int]] = None) -> PairIntegrals:
    i, j = pair
    if not 1 <= i < j <= spec.N:
        raise ValueError(f"pair must satisfy 1 <= i < j <= {spec.N}, got {pair}")
    m, f1, f2, K, _, _ = _pair(spec, ladders, i - 1, j - 1, m)
    tag = f"{i}{j}"
    deg = f1.momentum_degree_hint
    return PairIntegrals((f1 - f2).renamed(f"I{tag}", deg), (f1 + f2).renamed(f"J{tag}", deg),
                         K, f1.real.renamed(f"X1_{tag}"), f1.imag.renamed(f"X2_{tag}"),
                         (i, j), m)


def cubic_system(omega: float, b: float, epsilon: int = 1) -> SystemSpec:
    """Deformed axis 1 plus a pure oscillator axis 2, both at frequency ``w``."""
    return SystemSpec(omega, (AxisParams(1, b, epsilon), AxisParams(1, harmonic=True)))


def third_order_integral_B(spec: SystemSpec) -> Observable:
    """The cubic integral ``B`` of the deformed-plus-harmonic system."""
    if spec.N != 2 or spec.axes[0].k != 1 or spec.axes[1].k != 1:
        raise ValueError("B is defined for a 2D system with k = (1, 1)")
    if spec.axes[0].harmonic or not spec.axes[1].harmonic:
        raise ValueError("B needs a deformed axis 1 and a harmonic axis 2")
    w = spec.omega
    ax = spec.axes[0]
    w2 = w * w

    def fn(x, p):
        x1, x2, p1, p2 = x[0], x[1], p[0], p[1]
        V = potential_1d(x1, w, ax)
        s = dual.sqrt(ax.b + x1 * x1)
        dV = (w2 / 18.0) * (10.0 * x1 + 4.0 * ax.epsilon * (s + x1 * x1 / s))
        g = w2 * x1 * x1 / 2.0 - 3.0 * V
        return (-x2 * p1**3 + x1 * p1 * p1 * p2 + g * x2 * p1 - g * dV * p2 / w2)

    return Observable(fn, 2, "B", 3)


def momentum_degree(obs: Observable, pt: Optional[PhasePoint] = None, *, seed: int = 0,
                    attempts: int = 5, base_scale: float = 1e3) -> int:
    """Empirical momentum degree from the scaling ``|f(x, s p)| ~ s^n``.

    Evaluates at ``s`` in {2, 4, 8, 16} and fits the log-log slope. The sample
    momenta are first scaled by ``base_scale`` so lower-order terms do not bias
    the slope; a slope more than 0.01 from an integer triggers a retry at a new
    random point, and :class:`NotPolynomialError` after ``attempts`` failures.
    """
    scales = np.array([2.0, 4.0, 8.0, 16.0])
    rng = np.random.default_rng(seed)
    last = float("nan")
    for attempt in range(attempts):
        if pt is None or attempt > 0:
            x = rng.uniform(0.2, 1.8, obs.dim) * rng.choice([-1.0, 1.0], obs.dim)
            p = rng.uniform(0.5, 1.5, obs.dim) * rng.choice([-1.0, 1.0], obs.dim)
        else:
            x, p = np.asarray(pt.x, float), np.asarray(pt.p, float)
        p = p * base_scale
        vals = np.array([abs(evaluate(obs, PhasePoint(x, s * p))) for s in scales])
        if np.all(vals == 0):
            return 0
        if np.any(vals == 0) or not np.all(np.isfinite(vals)):
            continue
        slope = np.polyfit(np.log(scales), np.log(vals), 1)[0]
        last = slope
        n = int(round(slope))
        if abs(slope - n) <= 0.01:
            return n
    raise NotPolynomialError(f"momentum scaling slope {last:.4f} is not an integer")
