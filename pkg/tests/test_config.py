import dataclasses

import pytest
from hypothesis import given
from hypothesis import strategies as st

from superint.config import (PRESETS, ConfigError, RunConfig, RunSettings, dump_config,
                             load_config, parse_config, preset)
from superint.systems import AxisParams, SystemSpec


@pytest.mark.parametrize("name", sorted(PRESETS))
def test_presets_round_trip(name):
    cfg = preset(name)
    assert parse_config(dump_config(cfg)) == cfg
    assert dump_config(parse_config(dump_config(cfg))) == dump_config(cfg)


def test_module_docstring_example_round_trips():
    import superint.config as mod
    text = mod.__doc__.split("::", 1)[1]
    text = "\n".join(line[4:] for line in text.splitlines())
    cfg = parse_config(text)
    assert cfg.system == preset("fig1").system
    assert parse_config(dump_config(cfg)) == cfg


def test_preset_parameters():
    f3 = preset("fig3")
    assert [ax.k for ax in f3.system.axes] == [7, 11, 4]
    assert [ax.b for ax in f3.system.axes] == [3, 5, 7]
    assert f3.run.p0 == (1.0, -3.0, 2.0)
    assert preset("fig2").system.axes[1].k == 4


@pytest.mark.parametrize("text", [
    "[system]\nomega 3\n",
    "[system]\nomega = 3\nk = 1, 2\ncolour = red\n",
    "[nonsense]\na = 1\n",
    "[system]\nomega = 3\nk = 1.5, 2\nb = 1, 1\nepsilon = 1, 1\n[run]\nx0 = 0, 0\np0 = 0, 0\n",
    "[system]\nomega = 3\nk = 1, 2\nb = 1\nepsilon = 1, 1\n",
    "[system]\nomega = 3\nk = 1, 2\nb = 1, 1\nepsilon = 1, 1\n[run]\nx0 = 1\np0 = 1\n",
    "[system]\nomega = -1\nk = 1\nb = 1\nepsilon = 1\n[run]\nx0 = 0\np0 = 0\n",
    "[system]\nomega = 3\nk = 1\nb = 1\nepsilon = 2\n[run]\nx0 = 0\np0 = 0\n",
    "[system]\nomega = 3\nk = 1\nb = 1\nepsilon = 1\n[run]\nx0 = 0\np0 = 0\n[outputs]\nformats = png\n",
])
def test_malformed_configs_raise(text):
    with pytest.raises(ConfigError):
        parse_config(text)


def test_overrides_on_preset_base():
    cfg = parse_config("[run]\nt_end = 5\n[sampling]\nseed = 3\n", preset("fig2"))
    assert cfg.run.t_end == 5 and cfg.seed == 3
    assert cfg.system == preset("fig2").system
    with pytest.raises(ConfigError):
        parse_config("[system]\nb = 1, 1\n", preset("fig2"))


def test_forced_m_and_harmonic_axes(tmp_path):
    text = ("[system]\nomega = 1\nk = 1, 2\nb = 1, 0\nepsilon = 1, 1\nharmonic = no, yes\n"
            "[run]\nx0 = 1, 0\np0 = 0, 1\n[integrals]\nm = 2, 1\n")
    path = tmp_path / "c.ini"
    path.write_text(text)
    cfg = load_config(str(path))
    assert cfg.m == (2, 1) and cfg.system.axes[1].harmonic
    assert parse_config(dump_config(cfg)) == cfg


def test_run_config_checks():
    spec = SystemSpec(1.0, (AxisParams(1, 1.0),))
    with pytest.raises(ConfigError):
        RunConfig(spec, RunSettings(x0=(0.0, 0.0), p0=(0.0, 0.0)))
    with pytest.raises(ConfigError):
        RunConfig(spec, RunSettings(x0=(0.0,), p0=(0.0,)), m=(0, 1))


@given(st.integers(1, 3).flatmap(lambda n: st.tuples(
    st.floats(0.1, 10), st.lists(st.integers(1, 12), min_size=n, max_size=n),
    st.lists(st.floats(0, 10), min_size=n, max_size=n),
    st.lists(st.sampled_from([1, -1]), min_size=n, max_size=n),
    st.lists(st.floats(-3, 3), min_size=2 * n, max_size=2 * n),
    st.integers(0, 2**31))))
def test_random_configs_round_trip(data):
    w, ks, bs, es, z, seed = data
    n = len(ks)
    cfg = RunConfig(SystemSpec(w, tuple(AxisParams(k, b, e) for k, b, e in zip(ks, bs, es))),
                    RunSettings(x0=tuple(z[:n]), p0=tuple(z[n:])), seed=seed)
    assert parse_config(dump_config(cfg)) == cfg
    assert dataclasses.replace(cfg, seed=1).seed == 1


def test_readme_config_example_round_trips():
    import pathlib
    readme = (pathlib.Path(__file__).parents[1] / "README.md").read_text()
    block = readme.split("    [system]", 1)[1].split("\n## ", 1)[0]
    text = "[system]" + "\n".join(line[4:] for line in block.splitlines())
    cfg = parse_config(text)
    assert cfg.system == preset("fig1").system and cfg.outputs.directory == "out"
    assert parse_config(dump_config(cfg)) == cfg
