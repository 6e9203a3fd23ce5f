"""Measure single-axis return times across b, eps and energy.

Each deformed axis is integrated from x = x0, p = 0 and the first return of
the phase point is located by minimising the return distance; the table shows
T * k w / pi, which is 4 for every row if the axis is isochronous with period
4 pi / (k w).
"""

import argparse
import math

import numpy as np
from scipy.optimize import minimize_scalar

from superint.dynamics import integrate
from superint.phase_space import PhasePoint
from superint.systems import AxisParams, SystemSpec


def return_time(spec, x0, tol=1e-12):
    """First time the phase point comes back to ``(x0, 0)``."""
    init = PhasePoint([x0], [0.0])
    w = spec.omega * spec.axes[0].k
    traj = integrate(spec, init, (0, 6 * math.pi / w), tol, n_samples=6001)
    z0 = init.as_vector()
    t = traj.times
    d = np.linalg.norm(traj.states.as_vector() - z0[:, None], axis=0)
    scale = max(1.0, float(np.max(d)))
    for i in range(1, t.size - 1):
        if d[i] <= d[i - 1] and d[i] <= d[i + 1] and d[i] < 1e-2 * scale and t[i] > 0.1 / w:
            res = minimize_scalar(lambda s: np.linalg.norm(traj.state_at(s) - z0),
                                  bounds=(t[i - 1], t[i + 1]), method="bounded",
                                  options={"xatol": 1e-13})
            return float(res.x)
    return float("nan")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--omega", type=float, default=3.0)
    args = ap.parse_args()
    print(f"{'k':>3}{'b':>6}{'eps':>5}{'x0':>7}{'T k w / pi':>14}")
    for k in (1, 3):
        for b in (0.5, 3.0, 5.0):
            for eps in (1, -1):
                spec = SystemSpec(args.omega, (AxisParams(k, b, eps),))
                for x0 in (0.3, 1.3, 2.0):
                    T = return_time(spec, x0)
                    print(f"{k:>3}{b:>6g}{eps:>5d}{x0:>7g}{T * k * args.omega / math.pi:>14.9f}")


if __name__ == "__main__":
    main()
