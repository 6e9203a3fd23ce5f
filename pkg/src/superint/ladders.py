"""Classical ladder operators and their factorization polynomials.

A raising operator ``A+`` on axis j satisfies ``{H_j, A+} = i nu A+``; the
lowering operator is its complex conjugate. For the deformed oscillator the
raising operator is cubic in the momentum,

    A+ = p^3 - i c2(x) p^2 + c1(x) p - i c0(x),

and the coefficient functions are recovered here by a linear least-squares fit
of the ladder relation itself (the relation is affine in the unknown
multipliers, so one linear solve suffices). The printed closed form is kept
alongside as data to compare against, in a few readings.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple

import numpy as np

from . import dual
from .phase_space import Observable, PhasePoint, bracket, evaluate, sample_points
from .systems import AxisParams, SystemSpec, axis_hamiltonian

__all__ = [
    "LadderFitError",
    "RankDeficientError",
    "LadderOperator",
    "LadderFit",
    "FactorizationPolynomials",
    "ALPHA_NAMES",
    "ALPHA_TERMS",
    "PRINTED_ALPHA",
    "PRINTED_VARIANTS",
    "harmonic_ladder",
    "deformed_ladder",
    "printed_ladder",
    "ladder_from_alpha",
    "fit_ladder_coefficients",
    "fit_harmonic_coefficient",
    "verify_ladder",
    "pq_polynomials",
    "printed_pq",
    "system_ladders",
    "ladder_sample_points",
    "poly_of",
    "coefficient_table",
]


class LadderFitError(RuntimeError):
    def __init__(self, message: str, residual: float = float("nan")):
        super().__init__(f"{message} (residual {residual:.3e})")
        self.residual = residual


class RankDeficientError(LadderFitError):
    pass


@dataclass(frozen=True)
class LadderOperator:
    """Raising operator ``op`` with ``{H_axis, op} = i nu op``."""

    op: Observable
    nu: float
    axis: int = 0
    order: int = 1
    x_range: Optional[Tuple[float, float]] = None

    @property
    def raising(self) -> Observable:
        return self.op

    @property
    def lowering(self) -> Observable:
        return self.op.conj()

    @property
    def eigenvalue(self) -> complex:
        return 1j * self.nu

    def power(self, n: int) -> "LadderOperator":
        """``(A+)^n``, a ladder operator of frequency ``n nu``."""
        return LadderOperator(self.op ** n, n * self.nu, self.axis, n * self.order,
                              self.x_range)


ALPHA_NAMES = tuple(f"alpha{i}" for i in range(1, 9))
ALPHA_TERMS = (
    "c2: w x",
    "c1: w^2 b",
    "c1: w^2 x^2",
    "c1: w^2 eps x s",
    "c0: w^3 b x",
    "c0: w^3 x^3",
    "c0: w^3 eps b s",
    "c0: w^3 eps x^2 s",
)
# printed coefficients read with b^2 -> b; the printed 2/27 term also lacks w^3
PRINTED_ALPHA = np.array([1, 1 / 3, 1 / 3, 2 / 3, 1 / 3, 13 / 27, 2 / 27, 14 / 27])

PRINTED_VARIANTS = ("printed", "radicand_b", "b_squared_to_b")


def harmonic_ladder(omega: float, axis: int = 0, dim: int = 1) -> LadderOperator:
    """``A+ = p - i w x`` for ``H = p^2/2 + w^2 x^2/2``."""
    if not omega > 0:
        raise ValueError("omega must be positive")

    def fn(x, p):
        return p[axis] - 1j * omega * x[axis]

    return LadderOperator(Observable(fn, dim, f"a{axis + 1}+", 1), omega, axis, 1)


def ladder_from_alpha(omega_eff: float, ax: AxisParams, alpha, axis: int = 0,
                      dim: int = 1) -> Observable:
    """Cubic raising operator from the eight multipliers of the ansatz."""
    a = np.asarray(alpha, dtype=float)
    w, b, e = omega_eff, ax.b, ax.epsilon

    def fn(x, p):
        X, P = x[axis], p[axis]
        s = dual.sqrt(b + X * X)
        c2 = a[0] * w * X
        c1 = w**2 * (a[1] * b + a[2] * X * X + a[3] * e * X * s)
        c0 = w**3 * (a[4] * b * X + a[5] * X**3 + a[6] * e * b * s + a[7] * e * X * X * s)
        P2 = P * P
        return P2 * P - 1j * c2 * P2 + c1 * P - 1j * c0

    return Observable(fn, dim, f"A{axis + 1}+", 3)


def printed_ladder(omega: float, ax: AxisParams, variant: str = "printed", axis: int = 0,
                 dim: int = 1) -> LadderOperator:
    """The printed cubic raising operator, ``w -> k w``.

    ``variant``:
      * ``printed``: verbatim, radicand ``b^2 + x^2``
      * ``radicand_b``: as printed but with the potential's radicand ``b + x^2``
      * ``b_squared_to_b``: every ``b^2`` read as ``b``; the ``2/27`` term
        still without its ``w^3``
    """
    if variant not in PRINTED_VARIANTS:
        raise ValueError(f"unknown variant {variant!r}")
    w = omega * ax.k
    e = ax.epsilon
    bb = ax.b if variant == "b_squared_to_b" else ax.b**2
    rad = ax.b**2 if variant == "printed" else ax.b

    def fn(x, p):
        X, P = x[axis], p[axis]
        r = dual.sqrt(rad + X * X)
        c1 = bb * w**2 / 3 + w**2 * X * X / 3 + (2 / 3) * e * w**2 * X * r
        inner = (-(1 / 3) * bb * w**3 * X - (13 / 27) * w**3 * X**3
                 - (2 / 27) * bb * e * r - (14 / 27) * e * w**3 * X * X * r)
        P2 = P * P
        return P2 * P - 1j * w * X * P2 + c1 * P + 1j * inner

    return LadderOperator(Observable(fn, dim, f"A{axis + 1}+[printed:{variant}]", 3), w,
                          axis, 3)


def _basis(omega_eff: float, ax: AxisParams, reduced: bool):
    """Constant part and per-multiplier terms of the cubic ansatz (1D)."""
    w, b, e = omega_eff, ax.b, ax.epsilon

    def s(x):
        return dual.sqrt(b + x * x)

    base = Observable(lambda x, p: p[0] ** 3, 1, "p^3", 3)
    if reduced:
        terms = [
            lambda x, p: -1j * w * x[0] * p[0] ** 2,
            lambda x, p: w**2 * x[0] ** 2 * p[0],
            lambda x, p: -1j * w**3 * x[0] ** 3,
        ]
    else:
        terms = [
            lambda x, p: -1j * w * x[0] * p[0] ** 2,
            lambda x, p: w**2 * b * p[0],
            lambda x, p: w**2 * x[0] ** 2 * p[0],
            lambda x, p: w**2 * e * x[0] * s(x[0]) * p[0],
            lambda x, p: -1j * w**3 * b * x[0],
            lambda x, p: -1j * w**3 * x[0] ** 3,
            lambda x, p: -1j * w**3 * e * b * s(x[0]),
            lambda x, p: -1j * w**3 * e * x[0] ** 2 * s(x[0]),
        ]
    return base, [Observable(t, 1, f"t{i}") for i, t in enumerate(terms)]


@dataclass(frozen=True)
class LadderFit:
    names: Tuple[str, ...]
    values: np.ndarray
    residual: float
    samples: int
    half_line: Optional[int] = None


def _solve_affine(H: Observable, base: Observable, terms: Sequence[Observable], nu: float,
                  pts: PhasePoint):
    """Least-squares multipliers making ``{H, base + sum a_i t_i} = i nu (...)``."""

    def rel(obs):
        return evaluate(bracket(H, obs), pts) - 1j * nu * evaluate(obs, pts)

    r0 = rel(base)
    cols = np.stack([rel(t) for t in terms], axis=1)
    M = np.concatenate([cols.real, cols.imag], axis=0)
    rhs = -np.concatenate([r0.real, r0.imag])
    scale = np.linalg.norm(M, axis=0)
    if np.any(scale == 0):
        raise RankDeficientError("ansatz column vanishes on the sample set", 0.0)
    sv = np.linalg.svd(M / scale, compute_uv=False)
    if sv[-1] < 1e-10 * sv[0]:
        raise RankDeficientError("ansatz basis is redundant at these parameters",
                                 float(sv[-1] / sv[0]))
    sol = np.linalg.lstsq(M / scale, rhs, rcond=None)[0]
    return sol / scale


def ladder_sample_points(ax: AxisParams, count: int, seed: int,
                         half_line: Optional[int] = None) -> PhasePoint:
    if half_line == 1:
        return sample_points(1, count, seed, x_ranges={0: (0.1, 2.0)})
    if half_line == -1:
        return sample_points(1, count, seed, x_ranges={0: (-2.0, -0.1)})
    exclude = (0,) if ax.b == 0 and not ax.harmonic else ()
    return sample_points(1, count, seed, exclude_near_zero=exclude)


def fit_ladder_coefficients(omega: float, ax: AxisParams, *, samples: int = 500,
                            seed: int = 0, half_line: Optional[int] = None,
                            tol: float = 1e-8) -> LadderFit:
    """Fit the cubic ansatz multipliers from the ladder relation.

    For ``b > 0`` the eight multipliers are independent and returned as
    ``alpha1..alpha8``. At ``b = 0`` the potential is piecewise and the
    ``b``-terms vanish, so the fit runs on one half line (``half_line`` = +1
    or -1) with the three merged coefficients of ``x p^2``, ``x^2 p`` and
    ``x^3``.
    """
    w = omega * ax.k
    H = axis_hamiltonian(SystemSpec(w, (AxisParams(1, ax.b, ax.epsilon),)), 0)
    reduced = ax.b == 0
    if reduced and half_line not in (1, -1):
        raise RankDeficientError("b = 0 needs a half-line fit (half_line=+1 or -1)", 0.0)
    if not reduced and half_line is not None:
        raise ValueError("half_line only applies when b = 0")
    pts = ladder_sample_points(ax, samples, seed, half_line)
    base, terms = _basis(w, ax, reduced)
    values = _solve_affine(H, base, terms, w, pts)
    op = base
    for c, t in zip(values, terms):
        op = op + float(c) * t
    L = LadderOperator(op, w, 0, 3)
    residual = verify_ladder(H, L, pts)
    names = ("c2:x", "c1:x^2", "c0:x^3") if reduced else ALPHA_NAMES
    if residual > tol:
        raise LadderFitError("fitted ladder fails the ladder relation", residual)
    return LadderFit(names, values, residual, samples, half_line)


def fit_harmonic_coefficient(omega: float, *, samples: int = 200, seed: int = 0) -> float:
    """Fit ``beta`` in ``A+ = p - i beta w x`` for the pure oscillator."""
    H = axis_hamiltonian(SystemSpec(omega, (AxisParams(harmonic=True),)), 0)
    base = Observable(lambda x, p: p[0], 1, "p", 1)
    term = Observable(lambda x, p: -1j * omega * x[0], 1, "-iwx", 0)
    pts = sample_points(1, samples, seed)
    return float(_solve_affine(H, base, [term], omega, pts)[0])


def _reduced_ladder(omega_eff: float, coeffs, half_line: int, axis: int, dim: int) -> Observable:
    c = np.asarray(coeffs, dtype=float)
    w = omega_eff

    def fn(x, p):
        X, P = x[axis], p[axis]
        P2 = P * P
        return P2 * P - 1j * c[0] * w * X * P2 + c[1] * w**2 * X * X * P - 1j * c[2] * w**3 * X**3

    return Observable(fn, dim, f"A{axis + 1}+[x{'>' if half_line > 0 else '<'}0]", 3)


def deformed_ladder(omega: float, ax: AxisParams, coefficient_source: str = "fitted", *,
                    axis: int = 0, dim: int = 1, seed: int = 0,
                    half_line: Optional[int] = None, samples: int = 500) -> LadderOperator:
    """Cubic ladder operator of a deformed-oscillator axis, ``nu = k w``.

    ``coefficient_source="printed"`` (alias ``"paper"``) transcribes the
    printed operator, which does not satisfy the ladder relation for general
    ``b``;
    ``"fitted"`` uses :func:`fit_ladder_coefficients`. With ``b = 0`` the
    fitted operator is valid on one half line only, ``x > 0`` by default.
    """
    if coefficient_source in ("printed", "paper"):
        return printed_ladder(omega, ax, "printed", axis, dim)
    if coefficient_source != "fitted":
        raise ValueError(f"unknown coefficient source {coefficient_source!r}")
    w = omega * ax.k
    if ax.b == 0:
        half_line = half_line or 1
        fit = fit_ladder_coefficients(omega, ax, seed=seed, half_line=half_line,
                                      samples=samples)
        op = _reduced_ladder(w, fit.values, half_line, axis, dim)
        x_range = (0.1, 2.0) if half_line > 0 else (-2.0, -0.1)
        return LadderOperator(op, w, axis, 3, x_range)
    fit = fit_ladder_coefficients(omega, ax, seed=seed, samples=samples)
    return LadderOperator(ladder_from_alpha(w, ax, fit.values, axis, dim), w, axis, 3)


def system_ladders(spec: SystemSpec, source: str = "fitted", seed: int = 0) -> list:
    """One raising operator per axis, harmonic axes getting the first-order one."""
    out = []
    for j, ax in enumerate(spec.axes):
        if ax.harmonic:
            out.append(harmonic_ladder(spec.omega * ax.k, j, spec.N))
        else:
            out.append(deformed_ladder(spec.omega, ax, source, axis=j, dim=spec.N, seed=seed))
    return out


def verify_ladder(H_axis: Observable, L: LadderOperator, pts: PhasePoint) -> float:
    """``max |{H, A+} - i nu A+| / (1 + |A+|)`` over ``pts``."""
    a = np.atleast_1d(evaluate(L.op, pts))
    lhs = np.atleast_1d(evaluate(bracket(H_axis, L.op), pts))
    return float(np.max(np.abs(lhs - 1j * L.nu * a) / (1 + np.abs(a))))


def poly_of(coeffs, obs: Observable) -> Observable:
    """Polynomial (ascending coefficients) of an observable, by Horner."""
    c = [complex(v) for v in coeffs]

    def fn(x, p):
        h = obs.fn(x, p)
        acc = c[-1]
        for v in reversed(c[:-1]):
            acc = acc * h + v
        return acc

    return Observable(fn, obs.dim, f"poly({obs.name})")


@dataclass(frozen=True)
class FactorizationPolynomials:
    """``{A-, A+} = P(H)`` and ``A+ A- = Q(H)``, ascending coefficients."""

    P: np.ndarray
    Q: np.ndarray
    source: str = "fitted"
    residual_P: float = 0.0
    residual_Q: float = 0.0
    extras: dict = field(default_factory=dict)

    def P_at(self, h):
        return np.polynomial.polynomial.polyval(h, self.P)

    def Q_at(self, h):
        return np.polynomial.polynomial.polyval(h, self.Q)

    def P_of(self, obs: Observable) -> Observable:
        return poly_of(self.P, obs)

    def Q_of(self, obs: Observable) -> Observable:
        return poly_of(self.Q, obs)


def printed_pq(omega: float, ax: AxisParams) -> FactorizationPolynomials:
    """Printed P and Q, with the undefined ``w_j`` read as ``k_j w``."""
    w, k, b = omega, ax.k, ax.b
    P = 1j * np.array([
        (2 / 27) * (4 * b**2 - 8 * b**3 + 3 * b**4) * w**5 * k**5,
        (16 / 3) * (-b + b**2) * w**3 * k**3,
        24 * w * k,
    ])
    wj2 = (w * k) ** 2
    # (2/729) (18H + (b-2) b wj^2)^2 (9H + b(2b-1) wj^2)
    u = np.polynomial.polynomial.polypow([(b - 2) * b * wj2, 18.0], 2)
    Q = (2 / 729) * np.polynomial.polynomial.polymul(u, [b * (2 * b - 1) * wj2, 9.0])
    return FactorizationPolynomials(P.astype(complex), Q.astype(complex), "printed")


def _fit_poly(h, y, degree):
    scale = max(1.0, float(np.max(np.abs(h))))
    V = np.vander(h / scale, degree + 1, increasing=True)
    c = np.linalg.lstsq(V.astype(complex), y.astype(complex), rcond=None)[0]
    c = c / scale ** np.arange(degree + 1)
    fit = np.polynomial.polynomial.polyval(h, c)
    resid = float(np.max(np.abs(fit - y)) / max(1.0, float(np.max(np.abs(y)))))
    return c, resid


def pq_polynomials(omega: float, ax: AxisParams, source: str = "fitted", *,
                   ladder: Optional[LadderOperator] = None, pts: Optional[PhasePoint] = None,
                   seed: int = 0, samples: int = 300, tol: float = 1e-7) -> FactorizationPolynomials:
    """Factorization polynomials of an axis ladder.

    ``source="fitted"`` samples ``A+ A-`` and ``{A-, A+}`` and fits polynomials
    in ``H`` of degree ``order`` and ``order - 1``. The fit residual is
    ``max |fit - data| / max(1, max |data|)``; above ``tol`` the bracket is
    not a polynomial in ``H`` and :class:`LadderFitError` is raised.
    ``ladder`` overrides the default (deformed or harmonic) 1D operator.
    """
    if source in ("printed", "paper"):
        if ax.harmonic:
            w = omega * ax.k
            return FactorizationPolynomials(np.array([2j * w]), np.array([0, 2], complex),
                                            "printed")
        return printed_pq(omega, ax)
    if source != "fitted":
        raise ValueError(f"unknown source {source!r}")
    if ladder is None:
        ladder = (harmonic_ladder(omega * ax.k) if ax.harmonic
                  else deformed_ladder(omega, ax, "fitted", seed=seed))
    if ladder.op.dim != 1:
        raise ValueError("pq_polynomials works on one-dimensional ladders")
    H = axis_hamiltonian(SystemSpec(omega, (ax,)), 0)
    if pts is None:
        half = None
        if ladder.x_range is not None:
            half = 1 if ladder.x_range[0] > 0 else -1
        pts = ladder_sample_points(ax, samples, seed + 1, half)
    h = np.real(evaluate(H, pts))
    a = evaluate(ladder.op, pts)
    q_data = a * np.conj(a)
    p_data = evaluate(bracket(ladder.lowering, ladder.raising), pts)
    Q, rq = _fit_poly(h, q_data, ladder.order)
    P, rp = _fit_poly(h, p_data, ladder.order - 1)
    if rq > tol or rp > tol:
        raise LadderFitError("factorization data is not polynomial in H", max(rq, rp))
    return FactorizationPolynomials(P, Q, "fitted", rp, rq)


def coefficient_table(rows) -> str:
    """Plain-text table of ``(name, printed, fitted)`` rows with ``|difference|``."""
    lines = [f"{'coefficient':<22}{'printed':>22}{'fitted':>22}{'|difference|':>16}"]
    for name, printed, fitted in rows:
        diff = abs(printed - fitted)
        lines.append(f"{name:<22}{_fmt(printed):>22}{_fmt(fitted):>22}{diff:>16.3e}")
    return "\n".join(lines)


def _fmt(v) -> str:
    if isinstance(v, complex) or np.iscomplexobj(v):
        v = complex(v)
        if abs(v.real) <= 1e-12 * max(1.0, abs(v)):
            return f"{v.imag:.12g}i"
        return f"{v.real:.12g}{v.imag:+.12g}i"
    return f"{float(v):.12g}"
