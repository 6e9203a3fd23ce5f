"""Deformed-oscillator potentials and the separable Hamiltonians built from them.

Each axis carries ``V(x) = (w^2 k^2 / 18) (2b + 5x^2 + 4 eps x sqrt(b + x^2))``,
a double root of the quartic constraint below. At ``b = 0`` the potential is
harmonic with frequency ``k w`` for ``eps x > 0`` and ``k w / 3`` on the other
half line.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Tuple

import numpy as np

from . import dual
from .phase_space import Observable

__all__ = [
    "AxisParams",
    "SystemSpec",
    "potential_1d",
    "potential_1d_derivative",
    "axis_hamiltonian",
    "axis_hamiltonians",
    "hamiltonian",
    "quartic_residual",
    "quartic_constants",
    "quartic_terms",
]


@dataclass(frozen=True)
class AxisParams:
    """Per-axis parameters: frequency multiplier, deformation, branch sign.

    ``harmonic=True`` replaces the deformed potential by ``(k w)^2 x^2 / 2``
    exactly (used for the pure oscillator axis of the cubic-algebra system and
    for baselines). ``k`` may be any positive real here; integer ``k`` is
    enforced where commensurability matters (configs, period prediction).
    """

    k: float = 1
    b: float = 0.0
    epsilon: int = 1
    harmonic: bool = False

    def __post_init__(self):
        if not (self.k > 0 and math.isfinite(self.k)):
            raise ValueError(f"k must be positive, got {self.k}")
        if not (self.b >= 0 and math.isfinite(self.b)):
            raise ValueError(f"b must be >= 0, got {self.b}")
        if self.epsilon not in (1, -1):
            raise ValueError(f"epsilon must be +1 or -1, got {self.epsilon}")

    @property
    def k_is_integer(self) -> bool:
        return float(self.k).is_integer()


@dataclass(frozen=True)
class SystemSpec:
    omega: float
    axes: Tuple[AxisParams, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if not self.omega > 0:
            raise ValueError(f"omega must be positive, got {self.omega}")
        object.__setattr__(self, "axes", tuple(self.axes))
        if len(self.axes) < 1:
            raise ValueError("a system needs at least one axis")

    @property
    def N(self) -> int:
        return len(self.axes)

    def frequencies(self) -> np.ndarray:
        """Axis ladder frequencies ``k_j w``."""
        return np.array([ax.k * self.omega for ax in self.axes], dtype=float)

    def smooth_exclusions(self) -> Tuple[int, ...]:
        """Axes whose potential is only piecewise smooth at the origin."""
        return tuple(j for j, ax in enumerate(self.axes) if ax.b == 0 and not ax.harmonic)


def potential_1d(x, omega: float, ax: AxisParams):
    """Axis potential; ``x`` may be a float, array or dual."""
    w2 = (omega * ax.k) ** 2
    if ax.harmonic:
        return 0.5 * w2 * x * x
    s = dual.sqrt(ax.b + x * x)
    return (w2 / 18.0) * (2.0 * ax.b + 5.0 * x * x + 4.0 * ax.epsilon * x * s)


def potential_1d_derivative(x, omega: float, ax: AxisParams):
    """Closed-form ``dV/dx``; used by the equations of motion."""
    w2 = (omega * ax.k) ** 2
    if ax.harmonic:
        return w2 * x
    s = np.sqrt(ax.b + x * x)
    return (w2 / 18.0) * (10.0 * x + 4.0 * ax.epsilon * (s + x * x / s))


def axis_hamiltonian(spec: SystemSpec, j: int) -> Observable:
    ax = spec.axes[j]
    omega = spec.omega

    def fn(x, p):
        return 0.5 * p[j] * p[j] + potential_1d(x[j], omega, ax)

    return Observable(fn, spec.N, f"H{j + 1}", 2)


def axis_hamiltonians(spec: SystemSpec) -> list:
    return [axis_hamiltonian(spec, j) for j in range(spec.N)]


def hamiltonian(spec: SystemSpec) -> Observable:
    """``H = sum_j p_j^2/2 + V_j(x_j)``."""
    omega, axes = spec.omega, spec.axes

    def fn(x, p):
        total = 0.0
        for j, ax in enumerate(axes):
            total = total + 0.5 * p[j] * p[j] + potential_1d(x[j], omega, ax)
        return total

    return Observable(fn, spec.N, "H", 2)


def quartic_constants(omega: float, b: float) -> Tuple[float, float]:
    """``(c, d)`` for which the quartic has a double root."""
    c = 2.0**3 * omega**8 * b**3 / 3.0**6
    d = omega**4 * b**2 / 3.0**3
    return c, d


def quartic_terms(x, v, omega: float, b: float):
    """The five monomial groups of the quartic in ``v``, highest degree first."""
    c, d = quartic_constants(omega, b)
    w2 = omega**2
    return (
        -9.0 * v**4,
        14.0 * w2 * x**2 * v**3,
        (6.0 * d - 15.0 * w2**2 * x**4 / 2.0) * v**2,
        (3.0 * w2**3 * x**6 / 2.0 - 2.0 * d * w2 * x**2) * v,
        c * x**2 - d**2 - d * w2**2 * x**4 / 2.0 - w2**4 * x**8 / 16.0,
    )


def quartic_residual(x, v, omega: float, b: float):
    """Value of the quartic constraint polynomial at potential value ``v``."""
    return sum(quartic_terms(x, v, omega, b))
