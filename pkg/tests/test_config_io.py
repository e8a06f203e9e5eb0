"""Config parsing, round-trip serialization, CSV/SVG writers."""

import math
import pathlib

import numpy as np
import pytest
import yaml

from magpump.config import (RunConfig, SweepSpec, load_config, parse_config,
                            serialize_config, sweep_axes_for)
from magpump.errors import ConfigError
from magpump.report import fmt_float, svg_line_plot, write_csv


def _parse(doc: dict) -> RunConfig:
    return parse_config(yaml.safe_dump(doc))


def test_minimal_config_fills_defaults():
    cfg = _parse({})
    assert cfg.model.a_mo == 0.1
    assert cfg.model.z1_star == 1.5
    assert len(cfg.chain.cells) == 2
    assert cfg.waveform.period == pytest.approx(1.2)
    assert cfg.numerics.dt == 1e-4
    assert cfg.numerics.n_cycles == 3
    assert cfg.duration() == pytest.approx(3.6)
    assert cfg.output_dir == "out"


def test_string_shorthands():
    cfg = _parse({"chain": "graded-5cell", "waveform": "square-500ms"})
    assert len(cfg.chain.cells) == 5
    assert cfg.waveform.period == 1.0


def test_model_block_symmetric_and_split():
    cfg = _parse({"model": {"a": 0.05}})
    assert cfg.model.a_mo == 0.05 and cfg.model.a_mi == 0.05
    cfg = _parse({"model": {"a_mo": 0.02, "a_mi": 0.07, "z1_star": 2.0}})
    assert cfg.model.a_mo == 0.02 and cfg.model.a_mi == 0.07
    assert cfg.model.z1_star == 2.0


def test_dimensional_model_block():
    cfg = _parse({"model_dimensional": {
        "k_e": 100.0, "z0": 0.004, "z1": 0.006, "k_mi": 1e-9, "k_mo": 1e-9,
        "z_in": 0.001, "z_out": 0.005}})
    assert cfg.model.a_mo == pytest.approx(0.0390625, rel=1e-12)
    assert cfg.model.z1_star == pytest.approx(1.5, rel=1e-12)


def test_explicit_chain_cells():
    cfg = _parse({"chain": {"cells": [{"a": 0.0},
                                      {"a": 0.1, "length": 2.0}],
                            "mobility": 5.0}})
    assert len(cfg.chain.cells) == 2
    assert cfg.chain.cells[1].length == 2.0
    assert cfg.chain.mobility == 5.0


def test_waveform_blocks():
    cfg = _parse({"waveform": {"preset": "trapezoid", "p_max": 5.0,
                               "p_min": 2.0}})
    assert cfg.waveform.pressure_at(0.4) == 5.0
    cfg = _parse({"waveform": {"square": {
        "period": 2.0, "p_high": 3.0, "p_low": -1.0, "ramp_fraction": 0.1}}})
    assert cfg.waveform.period == 2.0
    assert cfg.waveform.pressure_at(0.5) == 3.0
    cfg = _parse({"waveform": {"knots": [[0.0, 0.0], [0.5, 4.0]],
                               "period": 1.0}})
    assert cfg.waveform.pressure_at(0.25) == pytest.approx(2.0)


def test_sweep_block():
    cfg = _parse({"sweep": {"metric": "loop_area",
                            "axes": {"a": [0.1, 0.0, 0.05]}}})
    assert cfg.sweep.metric == "loop_area"
    axes = dict(cfg.sweep.axes)
    assert axes["a"] == (0.1, 0.0, 0.05)  # value order preserved from config
    assert cfg.sweep.n_points() == 3
    assert "a" in sweep_axes_for("net_volume_per_cycle")
    assert "mobility" not in sweep_axes_for("loop_area")


def test_single_value_axis_is_allowed():
    cfg = _parse({"sweep": {"metric": "a_crit_margin", "axes": {"a": [0.2]}}})
    assert cfg.sweep.n_points() == 1


def test_rejections():
    bad = [
        {"model": {"a": 0.1, "a_mo": 0.1}},            # redundant coefficients
        {"model": {"a": 0.1}, "model_dimensional": {}},  # two model blocks
        {"model": {"a": -0.1}},
        {"model": {"unknown_key": 1.0}},
        {"nonsense_top_key": {}},
        {"chain": "no-such-preset"},
        {"chain": {"preset": "asym-2cell", "cells": []}},
        {"chain": {"cells": []}},
        {"waveform": {"preset": "trapezoid", "square": {}}},
        {"waveform": {"knots": [[0.0, 0.0]]}},          # knots need a period
        {"numerics": {"dt": 0.0}},
        {"numerics": {"n_cycles": 0}},
        {"sweep": {"metric": "no-such-metric", "axes": {"a": [0.1]}}},
        {"sweep": {"metric": "loop_area", "axes": {}}},
        {"sweep": {"metric": "loop_area", "axes": {"mobility": [1.0]}}},
        {"sweep": {"metric": "loop_area", "axes": {"a": []}}},
        {"sweep": {"metric": "loop_area", "axes": {"a": [0.1]}, "extra": 1}},
        {"model": {"a": True}},                          # bool is not a number
    ]
    for doc in bad:
        with pytest.raises(ConfigError):
            _parse(doc)
    with pytest.raises(ConfigError):
        parse_config("not: [valid: yaml")


def test_sweep_cap():
    doc = {"sweep": {"metric": "loop_area",
                     "axes": {"a": [0.01 * k for k in range(5)]}},
           "numerics": {"sweep_cap": 3}}
    with pytest.raises(ConfigError, match="over the cap"):
        _parse(doc)


def test_round_trip_identity():
    docs = [
        {},
        {"chain": "graded-5cell", "waveform": "square-500ms"},
        {"model": {"a_mo": 0.02, "a_mi": 0.07, "z1_star": 2.0,
                   "z_in_star": 0.3, "z_out_star": 1.6}},
        {"waveform": {"knots": [[0.0, -1.0], [0.25, 6.5], [0.8, 0.125]],
                      "period": 1.1},
         "numerics": {"dt": 5e-5, "duration": 7.7}},
        {"sweep": {"metric": "net_volume_per_cycle",
                   "axes": {"a": [0.0, 0.1], "mobility": [5.0, 10.0]}},
         "output": {"directory": "elsewhere"}},
    ]
    for doc in docs:
        cfg = _parse(doc)
        again = parse_config(serialize_config(cfg))
        assert again == cfg, doc


def test_shipped_configs_parse_and_round_trip():
    cfg_dir = pathlib.Path(__file__).resolve().parents[1] / "configs"
    paths = sorted(cfg_dir.glob("*.yaml"))
    assert len(paths) >= 5
    for path in paths:
        cfg = load_config(path)
        assert isinstance(cfg, RunConfig)
        again = parse_config(serialize_config(cfg))
        assert again == cfg, path.name


def test_load_config_missing_file(tmp_path):
    with pytest.raises(OSError):
        load_config(tmp_path / "nope.yaml")


def test_fmt_float_round_trips():
    rng = np.random.default_rng(41)
    for _ in range(200):
        x = float(rng.standard_normal()) * 10.0 ** int(rng.integers(-8, 8))
        assert float(fmt_float(x)) == x
    assert fmt_float(0.0) == "0"
    assert float(fmt_float(math.pi)) == math.pi


def test_write_csv_deterministic(tmp_path):
    rows = [[1.0, "x", None, True], [0.5, "y", 2.0, False]]
    p1, p2 = tmp_path / "a.csv", tmp_path / "b.csv"
    write_csv(p1, ["v", "name", "opt", "flag"], rows)
    write_csv(p2, ["v", "name", "opt", "flag"], rows)
    b1, b2 = p1.read_bytes(), p2.read_bytes()
    assert b1 == b2
    text = b1.decode()
    assert text.splitlines()[0] == "v,name,opt,flag"
    assert "true" in text and "false" in text
    assert ",," in text  # None becomes an empty cell


def test_svg_plot_is_self_contained(tmp_path):
    xs = list(np.linspace(0.0, 1.0, 50))
    ys = [math.sin(6.0 * x) for x in xs]
    path = tmp_path / "plot.svg"
    svg_line_plot(path, [("wave", xs, ys)], title="t", xlabel="x", ylabel="y")
    text = path.read_text()
    assert text.startswith("<svg")
    assert "http://" not in text.replace("http://www.w3.org", "")
    assert "wave" in text
    # degenerate axis still renders
    svg_line_plot(tmp_path / "flat.svg", [("flat", [0.0, 1.0], [2.0, 2.0])],
                  title="t", xlabel="x", ylabel="y")
    assert (tmp_path / "flat.svg").read_text().startswith("<svg")


def test_sweep_spec_normalization():
    # axis pairs are sorted by name; values keep their given order
    spec = SweepSpec(metric="net_volume_per_cycle",
                     axes=(("mobility", (5.0, 10.0)), ("a", (0.3, 0.1))))
    assert [name for name, _ in spec.axes] == ["a", "mobility"]
    assert dict(spec.axes)["a"] == (0.3, 0.1)
    with pytest.raises(ConfigError):
        SweepSpec(metric="loop_area", axes=(("a", ()),))
