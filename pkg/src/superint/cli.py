"""Command-line front end: ``superint verify | simulate | report``.

Exit codes: 0 success, 1 a suite or run failed, 2 usage or config error.
"""

from __future__ import annotations

import argparse
import dataclasses
import itertools
import os
import sys
import tempfile
from typing import Optional, Sequence

from .config import ConfigError, RunConfig, load_config, preset
from .dynamics import IntegrationError, closure_test, integrate, predict_period, trajectory_csv, trajectory_svg
from .integrals import IncommensurateError, build_integrals, build_integrals_nd
from .ladders import LadderFitError, system_ladders
from .phase_space import PhasePoint
from .report import build_report, format_verification, run_verification


def _atomic_write(path: str, data: bytes) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _resolve(args) -> RunConfig:
    base = preset(args.preset) if args.preset else None
    if args.config:
        cfg = load_config(args.config, base)
    elif base is not None:
        cfg = base
    else:
        cfg = preset("fig1")
    if args.seed is not None:
        cfg = dataclasses.replace(cfg, seed=args.seed)
    if args.tol is not None:
        cfg = dataclasses.replace(cfg, run=dataclasses.replace(cfg.run, tolerance=args.tol))
    if args.out is not None:
        cfg = dataclasses.replace(cfg, outputs=dataclasses.replace(cfg.outputs,
                                                                   directory=args.out))
    return cfg


def cmd_verify(cfg: RunConfig, stream=None) -> int:
    stream = stream or sys.stdout
    results = run_verification(cfg)
    stream.write(format_verification(results, cfg))
    return 0 if all(r.passed for r in results) else 1


def _monitors(cfg: RunConfig):
    spec = cfg.system
    if spec.N < 2:
        return {}
    ladders = system_ladders(spec, "fitted", cfg.seed)
    if spec.N == 2:
        iset = build_integrals(spec, ladders, cfg.m)
        return {"K": iset.K, "X1": iset.X1, "X2": iset.X2}
    mons = {}
    for i, j in itertools.combinations(range(1, spec.N + 1), 2):
        pi = build_integrals_nd(spec, ladders, (i, j))
        mons[f"K{i}{j}"] = pi.K
        mons[f"X1_{i}{j}"] = pi.X1
        mons[f"X2_{i}{j}"] = pi.X2
    return mons


def cmd_simulate(cfg: RunConfig, stream=None) -> int:
    stream = stream or sys.stdout
    spec, run, out = cfg.system, cfg.run, cfg.outputs
    init = PhasePoint(run.x0, run.p0)
    try:
        mons = _monitors(cfg)
    except (IncommensurateError, LadderFitError) as exc:
        stream.write(f"cannot build integrals: {exc}\n")
        return 1
    try:
        traj = integrate(spec, init, (0.0, run.t_end), run.tolerance, monitors=mons)
    except IntegrationError as exc:
        stream.write(f"integration failed: {exc}\n")
        return 1
    written = []
    if "csv" in out.formats:
        path = os.path.join(out.directory, f"{out.name}.csv")
        _atomic_write(path, trajectory_csv(traj))
        written.append(path)
    if "svg" in out.formats and traj.times.size > 1:
        if spec.N == 1:
            projections = []
        elif spec.N == 2:
            projections = [((0, 1), "")]
        else:
            projections = [((i, j), f"_x{i + 1}x{j + 1}")
                           for i, j in itertools.combinations(range(spec.N), 2)]
            projections.append(((0, 1, 2), "_3d"))
        for proj, suffix in projections:
            path = os.path.join(out.directory, f"{out.name}{suffix}.svg")
            _atomic_write(path, trajectory_svg(traj, proj, title=out.name))
            written.append(path)
    stream.write(f"trajectory  t=[0, {run.t_end:g}]  tol={run.tolerance:g}  "
                 f"samples={traj.times.size}  nfev={traj.nfev}\n")
    for name in traj.monitors:
        stream.write(f"  drift {name:<8} {traj.drift(name):.3e}\n")
    try:
        period = predict_period(spec)
        res = closure_test(spec, init, run.closure_tol, run.closure_eps)
        stream.write(f"closure  T*={period:.10g}  return distance={res.return_distance:.3e}  "
                     f"closed={res.closed}\n")
    except (ValueError, IntegrationError) as exc:
        stream.write(f"closure  not evaluated: {exc}\n")
    for path in written:
        stream.write(f"wrote {path}\n")
    return 0


def cmd_report(cfg: RunConfig, stream=None) -> int:
    stream = stream or sys.stdout
    try:
        text = build_report(cfg)
    except LadderFitError as exc:
        stream.write(f"fit failed: {exc}\n")
        return 1
    stream.write(text)
    if cfg.outputs.directory and cfg.outputs.directory != ".":
        _atomic_write(os.path.join(cfg.outputs.directory, f"{cfg.outputs.name}_report.txt"),
                      text.encode())
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="superint", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (("verify", "run the identity verification suites"),
                            ("simulate", "integrate a trajectory, write CSV/SVG"),
                            ("report", "printed-vs-fitted comparison tables")):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", metavar="PATH", help="key = value config file")
        p.add_argument("--preset", metavar="NAME", help="fig1, fig2, fig3 or fig4")
        p.add_argument("--seed", type=int, help="sampling seed")
        p.add_argument("--out", metavar="DIR", help="output directory")
        p.add_argument("--tol", type=float, help="integration tolerance")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = _resolve(args)
    except (ConfigError, OSError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    command = {"verify": cmd_verify, "simulate": cmd_simulate, "report": cmd_report}[args.command]
    return command(cfg)


if __name__ == "__main__":
    sys.exit(main())
