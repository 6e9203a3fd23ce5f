"""Polynomial Poisson algebras of the constructed integrals, checked pointwise.

Relations are stored as ``{lhs0, lhs1} = rhs`` with every side an observable;
:func:`check_relation` evaluates the residual on a sample batch. Structure
constants are cross-checked by least squares rather than trusted.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Sequence, Tuple

import numpy as np

from .integrals import IntegralSet, third_order_integral_B
from .ladders import FactorizationPolynomials
from .phase_space import Observable, PhasePoint, bracket, evaluate, gradient
from .systems import SystemSpec, axis_hamiltonian, hamiltonian

__all__ = [
    "AlgebraRelation",
    "AlgebraFitError",
    "CubicAlgebraReport",
    "algebra_relations_2d",
    "check_relation",
    "fit_bracket_coefficient",
    "cubic_algebra_check",
    "jacobian_ranks",
    "format_relations",
]


class AlgebraFitError(RuntimeError):
    pass


@dataclass(frozen=True)
class AlgebraRelation:
    lhs: Tuple[Observable, Observable]
    rhs: Observable
    label: str

    def residuals(self, pts: PhasePoint) -> np.ndarray:
        lhs = np.atleast_1d(evaluate(bracket(*self.lhs), pts))
        rhs = np.atleast_1d(evaluate(self.rhs, pts))
        return np.abs(lhs - rhs) / (1 + np.abs(rhs))


def check_relation(rel: AlgebraRelation, pts: PhasePoint, tol: float) -> Tuple[float, bool]:
    r = float(np.max(rel.residuals(pts)))
    return r, r <= tol


def algebra_relations_2d(iset: IntegralSet,
                         pq: Sequence[FactorizationPolynomials]) -> list:
    """The three brackets among ``K, I1, I2`` with right-hand sides in ``H, K``."""
    K, I1, I2 = iset.K, iset.I1, iset.I2
    m1, m2 = iset.m
    lam = iset.lam
    H1, H2 = iset.axis_hamiltonians
    H = H1 + H2
    h1 = ((H + K) * 0.5).renamed("(H+K)/2")
    h2 = ((H - K) * 0.5).renamed("(H-K)/2")
    Q1, P1 = pq[0].Q_of(h1), pq[0].P_of(h1)
    Q2, P2 = pq[1].Q_of(h2), pq[1].P_of(h2)

    def rhs3(x, p):
        q1, q2 = Q1.fn(x, p), Q2.fn(x, p)
        pre = 2.0 * q1 ** (m1 - 1) * q2 ** (m2 - 1)
        return pre * (m2 * m2 * q1 * P2.fn(x, p) - m1 * m1 * q2 * P1.fn(x, p))

    return [
        AlgebraRelation((K, I1), (2 * lam * I2).renamed("2 lam I2"), "{K, I1} = 2 lam I2"),
        AlgebraRelation((K, I2), (2 * lam * I1).renamed("2 lam I1"), "{K, I2} = 2 lam I1"),
        AlgebraRelation((I1, I2), Observable(rhs3, K.dim, "poly(H, K)"),
                        "{I1, I2} = 2 Q1^(m1-1) Q2^(m2-1) [m2^2 Q1 P2 - m1^2 Q2 P1]"),
    ]


def fit_bracket_coefficient(f: Observable, g: Observable, target: Observable,
                            pts: PhasePoint) -> complex:
    """Least-squares ``c`` in ``{f, g} ~ c * target``."""
    y = np.atleast_1d(evaluate(bracket(f, g), pts))
    t = np.atleast_1d(evaluate(target, pts))
    return complex(np.vdot(t, y) / np.vdot(t, t))


@dataclass
class CubicAlgebraReport:
    omega: float
    b: float
    epsilon: int
    samples: int
    residual_AC: float
    fitted: Dict[str, float]
    printed: Dict[str, float]
    alternatives: Dict[str, float] = field(default_factory=dict)
    fit_residual: float = 0.0

    def lines(self) -> list:
        out = [f"cubic algebra  w={self.omega:g} b={self.b:g} eps={self.epsilon:+d}  "
               f"samples={self.samples}",
               f"  {{A, C}} = -4 w^2 B      max residual {self.residual_AC:.3e}",
               f"  {{B, C}} polynomial fit residual {self.fit_residual:.3e}",
               f"  {'constant':<10}{'fitted':>22}{'printed':>22}"]
        for key in ("c3", "c2", "c1", "cA", "c0"):
            out.append(f"  {key:<10}{self.fitted[key]:>22.12g}{self.printed[key]:>22.12g}")
        for key, val in self.alternatives.items():
            out.append(f"  {key:<34}{val:>22.12g}")
        return out


def cubic_algebra_check(spec: SystemSpec, pts: PhasePoint, *, tol: float = 1e-6) -> CubicAlgebraReport:
    """Check ``{A, C} = -4 w^2 B`` and fit the ``{B, C}`` polynomial in ``A, H``.

    ``A`` is ``K = H1 - H2``, ``C = {A, B}`` is a bracket observable, so the
    second relation differentiates through nested brackets.
    """
    w = spec.omega
    b = spec.axes[0].b
    H = hamiltonian(spec)
    A = (axis_hamiltonian(spec, 0) - axis_hamiltonian(spec, 1)).renamed("A")
    B = third_order_integral_B(spec)
    C = bracket(A, B).renamed("C")
    ac = np.atleast_1d(evaluate(bracket(A, C), pts))
    bv = np.atleast_1d(evaluate(B, pts))
    target = -4 * w * w * bv
    residual_AC = float(np.max(np.abs(ac - target) / (1 + np.abs(target))))

    bc = np.real(np.atleast_1d(evaluate(bracket(B, C), pts)))
    a = np.real(np.atleast_1d(evaluate(A, pts)))
    h = np.real(np.atleast_1d(evaluate(H, pts)))
    M = np.stack([a**3, h * a * a, h**3, a, np.ones_like(a)], axis=1)
    scale = np.linalg.norm(M, axis=0)
    coef = np.linalg.lstsq(M / scale, bc, rcond=None)[0] / scale
    fit_residual = float(np.max(np.abs(M @ coef - bc)) / max(1.0, float(np.max(np.abs(bc)))))
    names = ("c3", "c2", "c1", "cA", "c0")
    fitted = dict(zip(names, map(float, coef)))
    printed = {"c3": 8.0, "c2": 12.0, "c1": -4.0, "cA": -16 * b**2 * w**4 / 27,
               "c0": 4 * b**3 * w**6 / 729}
    alternatives = {"cA reading -4*(4 b^2 w^4/27)": -16 * b**2 * w**4 / 27,
                    "cA reading -4 b^2 w^4/27": -4 * b**2 * w**4 / 27}
    report = CubicAlgebraReport(w, b, spec.axes[0].epsilon, len(pts), residual_AC, fitted,
                                printed, alternatives, fit_residual)
    if fit_residual > tol:
        raise AlgebraFitError(f"{{B, C}} is not fitted by the cubic ansatz "
                              f"(residual {fit_residual:.3e})")
    return report


def jacobian_ranks(observables: Sequence[Observable], pts: PhasePoint,
                   rel_threshold: float = 1e-8) -> np.ndarray:
    """Numerical rank of the Jacobian of real observables at each point.

    Each gradient row is normalised first (rank is invariant under row
    scaling, and the integrals differ by many orders of magnitude); singular
    values below ``rel_threshold * sigma_max`` then count as zero.
    """
    rows = []
    for obs in observables:
        dx, dp = gradient(obs, pts)
        g = np.concatenate([dx, dp], axis=0)
        if g.ndim == 1:
            g = g[:, None]
        rows.append(np.real(g))
    J = np.stack(rows, axis=0)  # (n_obs, 2N, M)
    ranks = []
    for k in range(J.shape[2]):
        Jk = J[:, :, k]
        norms = np.linalg.norm(Jk, axis=1, keepdims=True)
        Jk = np.divide(Jk, norms, out=np.zeros_like(Jk), where=norms > 0)
        sv = np.linalg.svd(Jk, compute_uv=False)
        ranks.append(int(np.sum(sv > rel_threshold * sv[0])) if sv[0] > 0 else 0)
    return np.array(ranks)


def format_relations(results) -> list:
    """Lines for ``(label, samples, residual, passed)`` tuples."""
    return [f"  {'PASS' if ok else 'FAIL'}  {label:<64} n={n:<5d} max_residual={r:.3e}"
            for label, n, r, ok in results]
