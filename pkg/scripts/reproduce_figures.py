"""Integrate the four figure presets and write CSV/SVG files plus a summary.

    python3 scripts/reproduce_figures.py --out figures
"""

import argparse
import math
import os

from superint import cli
from superint.config import preset
from superint.dynamics import closure_test, ladder_period, predict_period
from superint.phase_space import PhasePoint


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="figures")
    ap.add_argument("--tol", type=float, default=1e-10)
    args = ap.parse_args()
    os.makedirs(args.out, exist_ok=True)
    rows = []
    for name in ("fig1", "fig2", "fig3", "fig4"):
        code = cli.main(["simulate", "--preset", name, "--out", args.out, "--tol", str(args.tol)])
        if code:
            raise SystemExit(code)
        cfg = preset(name)
        init = PhasePoint(cfg.run.x0, cfg.run.p0)
        for label, T in (("2pi/(w gcd k)", ladder_period(cfg.system)),
                         ("axis-period lcm", predict_period(cfg.system))):
            res = closure_test(cfg.system, init, 1e-11, 1e-4, period=T)
            rows.append((name, label, T, res.return_distance))
    print()
    print(f"{'preset':<8}{'candidate':<18}{'T':>12}{'return distance':>18}")
    for name, label, T, d in rows:
        print(f"{name:<8}{label:<18}{T / math.pi:>10.6f}pi{d:>18.3e}")


if __name__ == "__main__":
    main()
