"""Trajectories of the separable deformed-oscillator systems.

Hamilton's equations are integrated with an adaptive explicit Runge-Kutta
pair (Dormand-Prince 8(5,3) via scipy) with dense output, and the registered
integrals are sampled along the way.

Each axis is isochronous. The ladder phase recurs after ``2 pi / (k_j w)``,
but the cubic raising operator winds twice around every orbit of a deformed
axis, so its period is ``4 pi / (k_j w)`` (at ``b = 0``: half a period at
frequency ``k w`` plus half at ``k w / 3``). Harmonic axes keep
``2 pi / (k_j w)``. Closure is tested at the common multiple of the axis
periods.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from typing import Dict, Optional, Sequence, Tuple

import numpy as np
from scipy.integrate import solve_ivp

from .phase_space import Observable, PhasePoint, evaluate
from .systems import SystemSpec, hamiltonian, potential_1d_derivative

__all__ = [
    "IntegrationError",
    "Trajectory",
    "ClosureResult",
    "hamilton_rhs",
    "integrate",
    "leapfrog",
    "predict_period",
    "axis_periods",
    "ladder_period",
    "closure_test",
    "relative_drift",
    "export_trajectory",
    "trajectory_csv",
    "trajectory_svg",
]


class IntegrationError(RuntimeError):
    pass


def hamilton_rhs(spec: SystemSpec, pt: PhasePoint):
    """``(dx/dt, dp/dt) = (p, -grad V)``."""
    if pt.N != spec.N:
        raise ValueError(f"point has {pt.N} degrees of freedom, system has {spec.N}")
    dp = np.stack([-potential_1d_derivative(pt.x[j], spec.omega, ax)
                   for j, ax in enumerate(spec.axes)])
    return pt.p.copy(), dp


def _flow(spec: SystemSpec):
    n = spec.N
    omega, axes = spec.omega, spec.axes

    def f(t, z):
        out = np.empty_like(z)
        out[:n] = z[n:]
        for j, ax in enumerate(axes):
            out[n + j] = -potential_1d_derivative(z[j], omega, ax)
        return out

    return f


@dataclass
class Trajectory:
    times: np.ndarray
    x: np.ndarray  # (N, M)
    p: np.ndarray  # (N, M)
    monitors: Dict[str, np.ndarray]
    spec: SystemSpec
    dense: Optional[object] = field(default=None, repr=False)
    nfev: int = 0

    def __post_init__(self):
        if self.times.ndim != 1 or np.any(np.diff(self.times) <= 0):
            raise ValueError("trajectory times must be strictly increasing")
        if self.x.shape[1] != self.times.size:
            raise ValueError("states and times are misaligned")

    @property
    def states(self) -> PhasePoint:
        return PhasePoint(self.x, self.p)

    def state_at(self, t: float) -> np.ndarray:
        if self.dense is None:
            raise ValueError("trajectory has no dense output")
        return self.dense(t)

    @property
    def final(self) -> PhasePoint:
        return PhasePoint(self.x[:, -1], self.p[:, -1])

    def drift(self, name: str) -> float:
        return relative_drift(self.monitors[name])


def relative_drift(values) -> float:
    """``max |v(t) - v(0)| / max(|v(0)|, 1e-300)``; ``v`` may be complex."""
    v = np.asarray(values)
    ref = abs(v[0])
    return float(np.max(np.abs(v - v[0])) / max(ref, 1e-300))


def integrate(spec: SystemSpec, init: PhasePoint, t_span: Tuple[float, float] = (0.0, 20.0),
              tol: float = 1e-10, *, monitors: Optional[Dict[str, Observable]] = None,
              n_samples: int = 1001) -> Trajectory:
    """Integrate Hamilton's equations with local error control ``rtol = atol = tol``.

    States are reported at ``n_samples`` uniformly spaced times (one sample
    for a zero-length span). ``monitors`` maps names to observables sampled
    along the trajectory; ``H`` is always included.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    if init.N != spec.N or init.batch is not None:
        raise ValueError("init must be a single point of the system's dimension")
    t0, t1 = map(float, t_span)
    if t1 < t0:
        raise ValueError("t_span must be increasing")
    mons = {"H": hamiltonian(spec)}
    mons.update(monitors or {})
    z0 = init.as_vector()
    if t1 == t0:
        times = np.array([t0])
        Z = z0[:, None]
        dense, nfev = None, 0
    else:
        sol = solve_ivp(_flow(spec), (t0, t1), z0, method="DOP853", rtol=tol, atol=tol,
                        dense_output=True)
        if sol.status != 0:
            raise IntegrationError(f"integration failed: {sol.message}")
        times = np.linspace(t0, t1, max(n_samples, 2))
        Z = sol.sol(times)
        dense, nfev = sol.sol, sol.nfev
    if not np.all(np.isfinite(Z)):
        raise IntegrationError("non-finite state encountered")
    n = spec.N
    pts = PhasePoint(Z[:n], Z[n:])
    values = {}
    for name, obs in mons.items():
        v = np.atleast_1d(evaluate(obs, pts))
        values[name] = np.real(v) if np.allclose(np.imag(v), 0, atol=0, rtol=1e-9) else v
    return Trajectory(times, Z[:n].copy(), Z[n:].copy(), values, spec, dense, nfev)


def leapfrog(spec: SystemSpec, init: PhasePoint, dt: float, n_steps: int) -> PhasePoint:
    """Kick-drift-kick Stormer-Verlet for ``H = p^2/2 + V(x)``; second order."""
    x = np.array(init.x, dtype=float)
    p = np.array(init.p, dtype=float)

    def force(x):
        return -np.array([potential_1d_derivative(x[j], spec.omega, ax)
                          for j, ax in enumerate(spec.axes)])

    f = force(x)
    for _ in range(n_steps):
        p = p + 0.5 * dt * f
        x = x + dt * p
        f = force(x)
        p = p + 0.5 * dt * f
    return PhasePoint(x, p)


def _integer_ks(spec: SystemSpec):
    ks = [ax.k for ax in spec.axes]
    if not all(float(k).is_integer() for k in ks):
        raise ValueError("period prediction needs integer k on every axis")
    return [int(k) for k in ks]


def axis_periods(spec: SystemSpec) -> np.ndarray:
    """``2 pi / (k w)`` for harmonic axes, ``4 pi / (k w)`` for deformed ones."""
    return np.array([(2 if ax.harmonic else 4) * math.pi / (ax.k * spec.omega)
                     for ax in spec.axes])


def ladder_period(spec: SystemSpec) -> float:
    """Recurrence time ``2 pi / (w gcd(k))`` of all ladder phases ``exp(i k_j w t)``."""
    return 2 * math.pi / (spec.omega * reduce(math.gcd, _integer_ks(spec)))


def predict_period(spec: SystemSpec) -> float:
    """Smallest common multiple of the axis periods; needs integer ``k``.

    In units of ``2 pi / w`` the axis periods are ``n_j / k_j`` with
    ``n_j`` = 1 (harmonic) or 2 (deformed); their least common multiple is
    ``lcm(numerators) / gcd(denominators)`` of the reduced fractions.
    """
    ks = _integer_ks(spec)
    fracs = [Fraction(1 if ax.harmonic else 2, k) for ax, k in zip(spec.axes, ks)]
    num = reduce(math.lcm, (f.numerator for f in fracs))
    den = reduce(math.gcd, (f.denominator for f in fracs))
    return 2 * math.pi / spec.omega * num / den


@dataclass(frozen=True)
class ClosureResult:
    closed: bool
    return_distance: float
    T_used: float
    min_distance: float
    T_min: float


def closure_test(spec: SystemSpec, init: PhasePoint, tol_int: float = 1e-11,
                 eps: float = 1e-4, period: Optional[float] = None,
                 window: float = 1e-3, n_window: int = 2001) -> ClosureResult:
    """Return distance ``||z(T) - z(0)||_2`` after one predicted period.

    ``period`` overrides :func:`predict_period` (needed for non-integer
    ``k``). The window ``[(1-window) T, (1+window) T]`` is scanned for the
    smallest return distance, reported as ``min_distance`` at ``T_min``.
    """
    T = predict_period(spec) if period is None else float(period)
    traj = integrate(spec, init, (0.0, T * (1 + window)), tol_int, n_samples=2)
    if not np.all(np.isfinite(traj.x)):
        raise IntegrationError("unbounded motion")
    z0 = init.as_vector()
    dist = float(np.linalg.norm(traj.state_at(T) - z0))
    ts = np.linspace(T * (1 - window), T * (1 + window), n_window)
    d = np.linalg.norm(traj.state_at(ts) - z0[:, None], axis=0)
    k = int(np.argmin(d))
    return ClosureResult(dist <= eps, dist, T, float(d[k]), float(ts[k]))


def _fmt(v: float) -> str:
    return repr(float(v))


def trajectory_csv(traj: Trajectory) -> bytes:
    """CSV: ``t, x1..xN, p1..pN, H``, then the other monitors in order."""
    n = traj.spec.N
    extra = [k for k in traj.monitors if k != "H"]
    header = (["t"] + [f"x{i + 1}" for i in range(n)] + [f"p{i + 1}" for i in range(n)]
              + ["H"] + extra)
    cols = [traj.times, *traj.x, *traj.p, np.real(traj.monitors["H"])]
    cols += [np.real(traj.monitors[k]) for k in extra]
    buf = io.StringIO()
    buf.write(",".join(header) + "\n")
    for row in zip(*cols):
        buf.write(",".join(_fmt(v) for v in row) + "\n")
    return buf.getvalue().encode()


def trajectory_svg(traj: Trajectory, projection: Sequence[int] = (0, 1), size: int = 480,
                   title: str = "") -> bytes:
    """Polyline of the trajectory projected on two position axes (0-based).

    A three-index projection is drawn as an oblique view of ``(x_a, x_b, x_c)``.
    """
    if len(projection) not in (2, 3) or not all(0 <= i < traj.spec.N for i in projection):
        raise ValueError(f"invalid projection {projection!r} for N={traj.spec.N}")
    if len(projection) == 2:
        u, v = traj.x[projection[0]], traj.x[projection[1]]
        labels = (f"x{projection[0] + 1}", f"x{projection[1] + 1}")
    else:
        a, b, c = (traj.x[i] for i in projection)
        u = a - 0.5 * c * math.cos(math.pi / 6)
        v = b - 0.5 * c * math.sin(math.pi / 6)
        labels = tuple(f"x{i + 1}" for i in projection[:2])
    margin = 40
    inner = size - 2 * margin
    umin, umax = float(np.min(u)), float(np.max(u))
    vmin, vmax = float(np.min(v)), float(np.max(v))
    span = max(umax - umin, vmax - vmin, 1e-12)
    px = margin + (u - umin) / span * inner
    py = size - margin - (v - vmin) / span * inner
    pts = " ".join(f"{a:.3f},{b:.3f}" for a, b in zip(px, py))
    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {size} {size}" '
        f'width="{size}" height="{size}">',
        f'<rect x="0" y="0" width="{size}" height="{size}" fill="white"/>',
        f'<line x1="{margin}" y1="{size - margin}" x2="{size - margin}" y2="{size - margin}" '
        'stroke="black"/>',
        f'<line x1="{margin}" y1="{margin}" x2="{margin}" y2="{size - margin}" stroke="black"/>',
        f'<text x="{size / 2:.0f}" y="{size - 8}" text-anchor="middle" font-size="14">'
        f'{labels[0]}  [{umin:.3g}, {umin + span:.3g}]</text>',
        f'<text x="14" y="{size / 2:.0f}" text-anchor="middle" font-size="14" '
        f'transform="rotate(-90 14 {size / 2:.0f})">{labels[1]}  [{vmin:.3g}, {vmin + span:.3g}]'
        '</text>',
    ]
    if title:
        lines.append(f'<text x="{size / 2:.0f}" y="20" text-anchor="middle" '
                     f'font-size="14">{title}</text>')
    lines.append(f'<polyline fill="none" stroke="steelblue" stroke-width="1" points="{pts}"/>')
    lines.append("</svg>")
    return ("\n".join(lines) + "\n").encode()


def export_trajectory(traj: Trajectory, format: str = "csv",
                      projection: Sequence[int] = (0, 1)) -> bytes:
    if format == "csv":
        return trajectory_csv(traj)
    if format == "svg":
        return trajectory_svg(traj, projection)
    raise ValueError(f"unknown format {format!r}")
