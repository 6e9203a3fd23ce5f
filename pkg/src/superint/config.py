"""Run configuration: strict ``key = value`` files with ``[section]`` headers.

Example (the ``fig1`` preset)::

    [system]
    omega = 3
    k = 1, 3
    b = 3, 5
    epsilon = 1, 1

    [run]
    t_end = 20
    tolerance = 1e-10
    x0 = 1, 1
    p0 = 1, -3

    [sampling]
    seed = 0
    samples = 100

    [outputs]
    directory = .
    name = fig1
"""

from __future__ import annotations

import configparser
import dataclasses
from dataclasses import dataclass, field
from typing import Optional, Tuple

from .systems import AxisParams, SystemSpec

__all__ = ["ConfigError", "RunSettings", "OutputSettings", "RunConfig", "PRESETS",
           "parse_config", "load_config", "dump_config", "preset"]


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunSettings:
    t_end: float = 20.0
    tolerance: float = 1e-10
    x0: Tuple[float, ...] = ()
    p0: Tuple[float, ...] = ()
    closure_tol: float = 1e-11
    closure_eps: float = 1e-4


@dataclass(frozen=True)
class OutputSettings:
    directory: str = "."
    name: str = "run"
    formats: Tuple[str, ...] = ("csv", "svg")


@dataclass(frozen=True)
class RunConfig:
    system: SystemSpec
    run: RunSettings = field(default_factory=RunSettings)
    m: Optional[Tuple[int, int]] = None
    outputs: OutputSettings = field(default_factory=OutputSettings)
    seed: int = 0
    samples: int = 100

    def __post_init__(self):
        n = self.system.N
        if len(self.run.x0) != n or len(self.run.p0) != n:
            raise ConfigError(f"initial state needs {n} positions and {n} momenta")
        for ax in self.system.axes:
            if not ax.k_is_integer:
                raise ConfigError(f"k must be a positive integer, got {ax.k}")
        if self.m is not None and (len(self.m) != 2 or min(self.m) < 1):
            raise ConfigError("m must be two positive integers")
        if self.samples < 1:
            raise ConfigError("samples must be positive")


_KEYS = {
    "system": {"omega", "k", "b", "epsilon", "harmonic"},
    "run": {"t_end", "tolerance", "x0", "p0", "closure_tol", "closure_eps"},
    "integrals": {"m"},
    "sampling": {"seed", "samples"},
    "outputs": {"directory", "name", "formats"},
}


def _floats(text: str) -> Tuple[float, ...]:
    return tuple(float(v) for v in text.split(",") if v.strip())


def _ints(text: str) -> Tuple[int, ...]:
    out = []
    for v in text.split(","):
        if not v.strip():
            continue
        f = float(v)
        if not f.is_integer():
            raise ConfigError(f"expected an integer, got {v.strip()!r}")
        out.append(int(f))
    return tuple(out)


def _bools(text: str) -> Tuple[bool, ...]:
    table = {"true": True, "1": True, "yes": True, "false": False, "0": False, "no": False}
    try:
        return tuple(table[v.strip().lower()] for v in text.split(",") if v.strip())
    except KeyError as exc:
        raise ConfigError(f"bad boolean {exc}") from None


def parse_config(text: str, base: Optional[RunConfig] = None) -> RunConfig:
    """Parse config text; fields absent from the text come from ``base``."""
    cp = configparser.ConfigParser(interpolation=None, strict=True)
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"config parse error: {exc}") from None
    for section in cp.sections():
        if section not in _KEYS:
            raise ConfigError(f"unknown section [{section}]")
        unknown = set(cp[section]) - _KEYS[section]
        if unknown:
            raise ConfigError(f"unknown key(s) in [{section}]: {', '.join(sorted(unknown))}")
    try:
        return _build(cp, base)
    except ConfigError:
        raise
    except (ValueError, TypeError) as exc:
        raise ConfigError(str(exc)) from None


def _get(cp, section, key):
    if cp.has_section(section) and key in cp[section]:
        return cp[section][key]
    return None


def _build(cp, base: Optional[RunConfig]) -> RunConfig:
    sysb = base.system if base else None
    omega = _get(cp, "system", "omega")
    omega = float(omega) if omega is not None else (sysb.omega if sysb else None)
    if omega is None:
        raise ConfigError("[system] omega is required")
    raw_k = _get(cp, "system", "k")
    if raw_k is not None:
        # a k list defines the axes; per-axis fields then come from this text only
        ks = _ints(raw_k)
        n = len(ks)
        raw = {key: _get(cp, "system", key) for key in ("b", "epsilon", "harmonic")}
        bs = _floats(raw["b"]) if raw["b"] is not None else (0.0,) * n
        eps = _ints(raw["epsilon"]) if raw["epsilon"] is not None else (1,) * n
        harm = _bools(raw["harmonic"]) if raw["harmonic"] is not None else (False,) * n
    elif sysb is not None:
        if any(_get(cp, "system", key) is not None for key in ("b", "epsilon", "harmonic")):
            raise ConfigError("per-axis fields need the k list alongside them")
        ks = tuple(int(ax.k) for ax in sysb.axes)
        bs = tuple(ax.b for ax in sysb.axes)
        eps = tuple(ax.epsilon for ax in sysb.axes)
        harm = tuple(ax.harmonic for ax in sysb.axes)
    else:
        raise ConfigError("[system] k is required")
    n = len(ks)
    if not (len(bs) == len(eps) == len(harm) == n):
        raise ConfigError("k, b, epsilon (and harmonic) need one entry per axis")
    system = SystemSpec(omega, tuple(AxisParams(k, b, e, h)
                                     for k, b, e, h in zip(ks, bs, eps, harm)))

    rb = base.run if base else RunSettings()
    run_kw = {}
    for key in ("t_end", "tolerance", "closure_tol", "closure_eps"):
        raw = _get(cp, "run", key)
        run_kw[key] = float(raw) if raw is not None else getattr(rb, key)
    for key in ("x0", "p0"):
        raw = _get(cp, "run", key)
        run_kw[key] = _floats(raw) if raw is not None else getattr(rb, key)
    run = RunSettings(**run_kw)

    raw_m = _get(cp, "integrals", "m")
    if raw_m is None:
        m = base.m if base else None
    elif raw_m.strip() in ("", "auto"):
        m = None
    else:
        m = _ints(raw_m)

    ob = base.outputs if base else OutputSettings()
    outputs = OutputSettings(
        _get(cp, "outputs", "directory") or ob.directory,
        _get(cp, "outputs", "name") or ob.name,
        tuple(v.strip() for v in _get(cp, "outputs", "formats").split(",") if v.strip())
        if _get(cp, "outputs", "formats") is not None else ob.formats,
    )
    for fmt in outputs.formats:
        if fmt not in ("csv", "svg"):
            raise ConfigError(f"unknown output format {fmt!r}")
    seed = _get(cp, "sampling", "seed")
    seed = int(seed) if seed is not None else (base.seed if base else 0)
    samples = _get(cp, "sampling", "samples")
    samples = int(samples) if samples is not None else (base.samples if base else 100)
    return RunConfig(system, run, m, outputs, seed, samples)


def _join(values) -> str:
    return ", ".join(repr(v) if isinstance(v, float) else str(v) for v in values)


def dump_config(cfg: RunConfig) -> str:
    """Serialize to the config text format; ``parse_config`` inverts it."""
    s, r, o = cfg.system, cfg.run, cfg.outputs
    lines = [
        "[system]",
        f"omega = {s.omega!r}",
        f"k = {_join(int(ax.k) for ax in s.axes)}",
        f"b = {_join(float(ax.b) for ax in s.axes)}",
        f"epsilon = {_join(ax.epsilon for ax in s.axes)}",
        f"harmonic = {_join(str(ax.harmonic).lower() for ax in s.axes)}",
        "",
        "[run]",
        f"t_end = {r.t_end!r}",
        f"tolerance = {r.tolerance!r}",
        f"x0 = {_join(float(v) for v in r.x0)}",
        f"p0 = {_join(float(v) for v in r.p0)}",
        f"closure_tol = {r.closure_tol!r}",
        f"closure_eps = {r.closure_eps!r}",
        "",
        "[integrals]",
        f"m = {_join(cfg.m) if cfg.m else 'auto'}",
        "",
        "[sampling]",
        f"seed = {cfg.seed}",
        f"samples = {cfg.samples}",
        "",
        "[outputs]",
        f"directory = {o.directory}",
        f"name = {o.name}",
        f"formats = {', '.join(o.formats)}",
    ]
    return "\n".join(lines) + "\n"


def _fig(name, ks, bs, x0, p0) -> RunConfig:
    axes = tuple(AxisParams(k, b, 1) for k, b in zip(ks, bs))
    return RunConfig(SystemSpec(3.0, axes),
                     RunSettings(20.0, 1e-10, tuple(map(float, x0)), tuple(map(float, p0))),
                     outputs=OutputSettings(".", name))


# figure captions: eps = 1, w = 3, t in [0, 20]; (v_x0, v_y0, v_z0) are the momenta
PRESETS = {
    "fig1": _fig("fig1", (1, 3), (3, 5), (1, 1), (1, -3)),
    "fig2": _fig("fig2", (3, 4), (3, 5), (1, 1), (1, -3)),
    "fig3": _fig("fig3", (7, 11, 4), (3, 5, 7), (1, 1, 1), (1, -3, 2)),
    "fig4": _fig("fig4", (5, 6, 2), (3, 5, 7), (1, 1, 1), (1, -3, 2)),
}


def preset(name: str) -> RunConfig:
    try:
        return PRESETS[name]
    except KeyError:
        raise ConfigError(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}") from None


def load_config(path: str, base: Optional[RunConfig] = None) -> RunConfig:
    with open(path) as fh:
        return parse_config(fh.read(), base)


def replace(cfg: RunConfig, **changes) -> RunConfig:
    return dataclasses.replace(cfg, **changes)
