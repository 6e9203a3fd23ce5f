"""Phase-space points, observables and the canonical Poisson bracket.

Observables are complex-valued functions of ``(x, p)``. Their ``fn`` receives
two lists of N components each; a component is a float, a numpy array of
sample values, or a :class:`~superint.dual.Dual`. Any function written with
ordinary arithmetic plus :func:`superint.dual.sqrt` can therefore be evaluated
pointwise, vectorised over a batch of points, and differentiated.

Differentiation is forward mode (exact to rounding): each of the 2N
coordinates is seeded with a fresh dual tag. The bracket of two observables is
itself an observable, so nested brackets such as ``{B, {A, B}}`` differentiate
through the inner gradient. Central differences exist only as a cross-check
(:func:`finite_difference_gradient`).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from numbers import Number
from typing import Callable, Optional, Sequence

import numpy as np

from . import dual
from .dual import DomainError, Dual, new_tag

__all__ = [
    "DomainError",
    "DimensionError",
    "PhasePoint",
    "Observable",
    "coordinate",
    "momentum",
    "constant",
    "evaluate",
    "gradient",
    "bracket",
    "poisson_bracket",
    "combine",
    "conj",
    "real_part",
    "imag_part",
    "finite_difference_gradient",
    "sample_points",
]


class DimensionError(ValueError):
    pass


@dataclass(frozen=True)
class PhasePoint:
    """Positions and momenta of an N degree-of-freedom system.

    ``x`` and ``p`` have shape ``(N,)`` for a single point or ``(N, M)`` for a
    batch of M points evaluated together.
    """

    x: np.ndarray
    p: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float)
        p = np.asarray(self.p, dtype=float)
        if x.ndim == 0 or x.shape != p.shape:
            raise DimensionError(f"x shape {x.shape} and p shape {p.shape} differ")
        if not (np.all(np.isfinite(x)) and np.all(np.isfinite(p))):
            raise ValueError("phase point has non-finite components")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "p", p)

    @property
    def N(self) -> int:
        return self.x.shape[0]

    @property
    def batch(self) -> Optional[int]:
        return self.x.shape[1] if self.x.ndim == 2 else None

    def __len__(self) -> int:
        return self.batch or 1

    def __getitem__(self, idx) -> "PhasePoint":
        if self.batch is None:
            raise IndexError("single phase point is not indexable")
        return PhasePoint(self.x[:, idx], self.p[:, idx])

    def as_vector(self) -> np.ndarray:
        """Stacked ``(x, p)``, shape ``(2N,)`` or ``(2N, M)``."""
        return np.concatenate([self.x, self.p], axis=0)

    @classmethod
    def from_vector(cls, z) -> "PhasePoint":
        z = np.asarray(z, dtype=float)
        n = z.shape[0] // 2
        return cls(z[:n], z[n:])


ObsFn = Callable[[Sequence, Sequence], object]


@dataclass(frozen=True, eq=False)
class Observable:
    """A differentiable complex-valued function on N-dimensional phase space."""

    fn: ObsFn
    dim: int
    name: str = "f"
    momentum_degree_hint: Optional[int] = field(default=None)

    def __call__(self, pt: PhasePoint):
        return evaluate(self, pt)

    def _lift(self, other, op: str) -> "Observable":
        if isinstance(other, Observable):
            _check_dims(self, other)
            return other
        if isinstance(other, Number):
            return constant(other, self.dim)
        raise TypeError(f"cannot {op} Observable and {type(other).__name__}")

    def __add__(self, other):
        g = self._lift(other, "add")
        f = self
        return Observable(lambda x, p: f.fn(x, p) + g.fn(x, p), f.dim,
                          f"({f.name} + {g.name})")

    def __radd__(self, other):
        return self._lift(other, "add") + self

    def __sub__(self, other):
        g = self._lift(other, "subtract")
        f = self
        return Observable(lambda x, p: f.fn(x, p) - g.fn(x, p), f.dim,
                          f"({f.name} - {g.name})")

    def __rsub__(self, other):
        return self._lift(other, "subtract") - self

    def __neg__(self):
        f = self
        return Observable(lambda x, p: -f.fn(x, p), f.dim, f"-{f.name}",
                          f.momentum_degree_hint)

    def __mul__(self, other):
        if isinstance(other, Number):
            f, c = self, other
            return Observable(lambda x, p: c * f.fn(x, p), f.dim, f"{c}*{f.name}",
                              f.momentum_degree_hint)
        g = self._lift(other, "multiply")
        f = self
        hint = None
        if f.momentum_degree_hint is not None and g.momentum_degree_hint is not None:
            hint = f.momentum_degree_hint + g.momentum_degree_hint
        return Observable(lambda x, p: f.fn(x, p) * g.fn(x, p), f.dim,
                          f"{f.name}*{g.name}", hint)

    def __rmul__(self, other):
        return self * other

    def __truediv__(self, other):
        if not isinstance(other, Number):
            raise TypeError("only division by scalars is supported")
        return self * (1 / other)

    def __pow__(self, n):
        if not isinstance(n, (int, np.integer)) or n < 0:
            raise TypeError("Observable supports non-negative integer powers only")
        f, n = self, int(n)
        hint = None if f.momentum_degree_hint is None else n * f.momentum_degree_hint
        return Observable(lambda x, p: f.fn(x, p) ** n, f.dim, f"{f.name}^{n}", hint)

    def conj(self) -> "Observable":
        f = self
        return Observable(lambda x, p: dual.conj(f.fn(x, p)), f.dim, f"conj({f.name})",
                          f.momentum_degree_hint)

    @property
    def real(self) -> "Observable":
        f = self
        return Observable(lambda x, p: dual.real(f.fn(x, p)), f.dim, f"Re({f.name})",
                          f.momentum_degree_hint)

    @property
    def imag(self) -> "Observable":
        f = self
        return Observable(lambda x, p: dual.imag(f.fn(x, p)), f.dim, f"Im({f.name})",
                          f.momentum_degree_hint)

    def renamed(self, name: str, momentum_degree_hint: Optional[int] = None) -> "Observable":
        hint = self.momentum_degree_hint if momentum_degree_hint is None else momentum_degree_hint
        return Observable(self.fn, self.dim, name, hint)


def _check_dims(f: Observable, g: Observable) -> None:
    if f.dim != g.dim:
        raise DimensionError(f"{f.name} has dimension {f.dim}, {g.name} has {g.dim}")


def coordinate(i: int, dim: int) -> Observable:
    """The position ``x_{i+1}`` (0-based index)."""
    if not 0 <= i < dim:
        raise DimensionError(f"coordinate index {i} out of range for dimension {dim}")
    return Observable(lambda x, p: x[i], dim, f"x{i + 1}", 0)


def momentum(i: int, dim: int) -> Observable:
    if not 0 <= i < dim:
        raise DimensionError(f"momentum index {i} out of range for dimension {dim}")
    return Observable(lambda x, p: p[i], dim, f"p{i + 1}", 1)


def constant(c, dim: int) -> Observable:
    return Observable(lambda x, p: c, dim, repr(c), 0)


def conj(f: Observable) -> Observable:
    return f.conj()


def real_part(f: Observable) -> Observable:
    return f.real


def imag_part(f: Observable) -> Observable:
    return f.imag


def combine(expr: Callable[..., Observable], *operands: Observable) -> Observable:
    """Apply an arithmetic expression to observables, checking dimensions.

    ``combine(lambda a, b: a * b.conj() + 2, A, B)`` is equivalent to writing
    the expression directly; this helper only validates the operands share a
    dimension before composing.
    """
    for g in operands[1:]:
        _check_dims(operands[0], g)
    out = expr(*operands)
    if not isinstance(out, Observable):
        raise TypeError("combine expression must produce an Observable")
    return out


def _components(pt: PhasePoint):
    return list(pt.x), list(pt.p)


def _check_point(obs: Observable, pt: PhasePoint) -> None:
    if pt.N != obs.dim:
        raise DimensionError(f"{obs.name} has dimension {obs.dim}, point has {pt.N}")


def _broadcast(val, pt: PhasePoint) -> np.ndarray:
    shape = () if pt.batch is None else (pt.batch,)
    return np.broadcast_to(np.asarray(val, dtype=complex), shape).copy()


def evaluate(obs: Observable, pt: PhasePoint):
    """Complex value(s) of ``obs`` at a point or batch of points."""
    _check_point(obs, pt)
    x, p = _components(pt)
    out = _broadcast(obs.fn(x, p), pt)
    return out[()] if out.ndim == 0 else out


def _grad_components(obs: Observable, x: list, p: list):
    """Forward-mode partials of ``obs.fn`` at components that may be duals."""
    n = len(x)
    dfdx, dfdp = [], []
    for coords, out in ((x, dfdx), (p, dfdp)):
        for k in range(n):
            tag = new_tag()
            seeded = list(coords)
            seeded[k] = Dual(coords[k], 1.0, tag)
            val = obs.fn(seeded, p) if coords is x else obs.fn(x, seeded)
            out.append(dual.derivative(val, tag))
    return dfdx, dfdp


def gradient(obs: Observable, pt: PhasePoint):
    """Partials ``(df/dx, df/dp)``, each complex of shape ``(N,)`` or ``(N, M)``."""
    _check_point(obs, pt)
    x, p = _components(pt)
    dfdx, dfdp = _grad_components(obs, x, p)
    return (np.stack([_broadcast(d, pt) for d in dfdx]),
            np.stack([_broadcast(d, pt) for d in dfdp]))


def bracket(f: Observable, g: Observable) -> Observable:
    """``{f, g} = sum_i df/dx_i dg/dp_i - df/dp_i dg/dx_i`` as an observable."""
    _check_dims(f, g)

    def fn(x, p):
        fx, fp = _grad_components(f, x, p)
        gx, gp = _grad_components(g, x, p)
        total = 0.0
        for i in range(len(x)):
            total = total + dual._mul(fx[i], gp[i]) - dual._mul(fp[i], gx[i])
        return total

    return Observable(fn, f.dim, "{" + f"{f.name}, {g.name}" + "}")


def poisson_bracket(f: Observable, g: Observable, pt: PhasePoint):
    return evaluate(bracket(f, g), pt)


def finite_difference_gradient(obs: Observable, pt: PhasePoint):
    """Central differences with step ``cbrt(eps) * max(1, |coordinate|)``."""
    _check_point(obs, pt)
    z = pt.as_vector()
    n = pt.N
    grads = []
    for k in range(2 * n):
        h = np.cbrt(np.finfo(float).eps) * np.maximum(1.0, np.abs(z[k]))
        up, dn = z.copy(), z.copy()
        up[k] = up[k] + h
        dn[k] = dn[k] - h
        fu = evaluate(obs, PhasePoint.from_vector(up))
        fd = evaluate(obs, PhasePoint.from_vector(dn))
        grads.append((fu - fd) / (2 * h))
    g = np.stack(grads)
    return g[:n], g[n:]


def sample_points(dim: int, count: int, seed: int = 0, *, low: float = -2.0,
                  high: float = 2.0, exclude_near_zero: Sequence[int] = (),
                  x_ranges: Optional[dict] = None) -> PhasePoint:
    """Seeded uniform batch from the standard verification domain.

    Positions and momenta are uniform in ``[low, high]``. Axes listed in
    ``exclude_near_zero`` reject ``|x| < 0.1`` (where the b=0 potential is only
    piecewise smooth). ``x_ranges`` maps an axis to its own ``(lo, hi)``
    position range, e.g. ``{0: (0.1, 2.0)}`` for a half line.
    """
    rng = np.random.default_rng(seed)
    x = rng.uniform(low, high, size=(dim, count))
    p = rng.uniform(low, high, size=(dim, count))
    for i in exclude_near_zero:
        bad = np.abs(x[i]) < 0.1
        while np.any(bad):
            x[i, bad] = rng.uniform(low, high, size=int(bad.sum()))
            bad = np.abs(x[i]) < 0.1
    for i, (lo, hi) in (x_ranges or {}).items():
        x[i] = rng.uniform(lo, hi, size=count)
    return PhasePoint(x, p)
