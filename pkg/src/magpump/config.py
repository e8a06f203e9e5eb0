"""Run configuration: a small YAML format with named blocks.

Blocks (all optional, defaults fill in): model or model_dimensional (not
both), chain, waveform, numerics, analyze, sweep, output.  chain and
waveform also accept a bare preset name string.  Unknown keys anywhere are
rejected so typos fail loudly instead of silently running defaults.

The canonical serialization always writes fully expanded blocks (presets
resolved to their cells and knots) at full float precision, and
parse_config(serialize_config(cfg)) reproduces cfg exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

import yaml

from .errors import ConfigError
from .model import DimensionalParams, MagnetoElasticParams, nondimensionalize
from .pump import Cell, ChainConfig, chain_preset
from .waveforms import Waveform, make_square, waveform_preset

__all__ = ["Numerics", "AnalyzeSpec", "SweepSpec", "RunConfig",
           "parse_config", "load_config", "serialize_config",
           "SWEEP_METRICS", "sweep_axes_for"]

SWEEP_METRICS = ("loop_area", "net_volume_per_cycle", "a_crit_margin")

# which sweep axes make sense for which metric
_AXES = {
    "loop_area": ("a", "z1_star", "p_high", "p_low"),
    "a_crit_margin": ("a", "z1_star"),
    "net_volume_per_cycle": ("a", "mobility", "leak_height",
                             "conductance_coefficient", "p_high", "p_low"),
}


def sweep_axes_for(metric: str) -> tuple:
    """Axis names accepted by a sweep metric."""
    return _AXES[metric]


@dataclass(frozen=True)
class Numerics:
    dt: float = 1e-4
    duration: float | None = None  # None: n_cycles waveform periods
    n_cycles: int = 3
    samples_per_cycle: int = 512
    sweep_cap: int = 10000

    def __post_init__(self):
        if not self.dt > 0.0:
            raise ConfigError(f"numerics.dt must be > 0, got {self.dt}")
        if self.duration is not None and not self.duration > 0.0:
            raise ConfigError(f"numerics.duration must be > 0, got {self.duration}")
        if self.n_cycles < 1:
            raise ConfigError(f"numerics.n_cycles must be >= 1, got {self.n_cycles}")
        if self.samples_per_cycle < 8:
            raise ConfigError("numerics.samples_per_cycle must be >= 8, got "
                              f"{self.samples_per_cycle}")
        if self.sweep_cap < 1:
            raise ConfigError(f"numerics.sweep_cap must be >= 1, got {self.sweep_cap}")


@dataclass(frozen=True)
class AnalyzeSpec:
    a_values: tuple = (0.0, 0.05, 0.1, 0.1341, 0.5)
    n_samples: int = 512

    def __post_init__(self):
        object.__setattr__(self, "a_values",
                           tuple(float(a) for a in self.a_values))
        if not self.a_values:
            raise ConfigError("analyze.a_values must not be empty")
        if any(a < 0.0 for a in self.a_values):
            raise ConfigError("analyze.a_values must be >= 0")
        if self.n_samples < 16:
            raise ConfigError(f"analyze.n_samples must be >= 16, got {self.n_samples}")


@dataclass(frozen=True)
class SweepSpec:
    metric: str
    axes: tuple  # ((name, (values...)), ...) sorted by name

    def __post_init__(self):
        if self.metric not in SWEEP_METRICS:
            raise ConfigError(f"sweep.metric must be one of {SWEEP_METRICS}, "
                              f"got {self.metric!r}")
        axes = tuple(sorted((str(n), tuple(float(v) for v in vals))
                            for n, vals in self.axes))
        object.__setattr__(self, "axes", axes)
        if not axes:
            raise ConfigError("sweep.axes must contain at least one axis")
        allowed = _AXES[self.metric]
        for name, vals in axes:
            if name not in allowed:
                raise ConfigError(f"sweep axis {name!r} not valid for metric "
                                  f"{self.metric!r}; allowed: {allowed}")
            if not vals:
                raise ConfigError(f"sweep axis {name!r} has no values")

    def n_points(self) -> int:
        n = 1
        for _, vals in self.axes:
            n *= len(vals)
        return n


@dataclass(frozen=True)
class RunConfig:
    model: MagnetoElasticParams
    chain: ChainConfig
    waveform: Waveform
    numerics: Numerics
    analyze: AnalyzeSpec
    sweep: SweepSpec | None
    output_dir: str

    def duration(self) -> float:
        if self.numerics.duration is not None:
            return self.numerics.duration
        return self.numerics.n_cycles * self.waveform.period


def _as_mapping(obj, path):
    if obj is None:
        return {}
    if not isinstance(obj, dict):
        raise ConfigError(f"{path} must be a mapping, got {type(obj).__name__}")
    return obj


def _reject_unknown(d, allowed, path):
    extra = sorted(set(d) - set(allowed))
    if extra:
        raise ConfigError(f"unknown key(s) {extra} in {path}; "
                          f"allowed: {sorted(allowed)}")


def _num(d, key, path, default=None):
    if key not in d:
        return default
    v = d[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ConfigError(f"{path}.{key} must be a number, got {v!r}")
    return float(v)


def _parse_model(d, path):
    d = _as_mapping(d, path)
    _reject_unknown(d, ("a", "a_mo", "a_mi", "z1_star", "z_in_star",
                        "z_out_star"), path)
    if "a" in d and ("a_mo" in d or "a_mi" in d):
        raise ConfigError(f"{path}: give either a or a_mo/a_mi, not both")
    z1 = _num(d, "z1_star", path, 1.5)
    z_in = _num(d, "z_in_star", path, 0.25)
    z_out = _num(d, "z_out_star", path, 1.25)
    if "a_mo" in d or "a_mi" in d:
        a_mo = _num(d, "a_mo", path, 0.0)
        a_mi = _num(d, "a_mi", path, 0.0)
    else:
        a = _num(d, "a", path, 0.1)
        a_mo = a_mi = a
    try:
        return MagnetoElasticParams(a_mo=a_mo, a_mi=a_mi, z1_star=z1,
                                    z_in_star=z_in, z_out_star=z_out)
    except ValueError as e:
        raise ConfigError(f"{path}: {e}") from e


def _parse_model_dimensional(d, path):
    d = _as_mapping(d, path)
    fields = ("k_e", "z0", "z1", "k_mi", "k_mo", "z_in", "z_out")
    _reject_unknown(d, fields, path)
    missing = [f for f in fields if f not in d]
    if missing:
        raise ConfigError(f"{path}: missing required field(s) {missing}")
    try:
        dim = DimensionalParams(**{f: _num(d, f, path) for f in fields})
        return nondimensionalize(dim)
    except ValueError as e:
        raise ConfigError(f"{path}: {e}") from e


def _parse_cell(d, model, path):
    d = _as_mapping(d, path)
    _reject_unknown(d, ("a", "a_mo", "a_mi", "length", "z1_star",
                        "z_in_star", "z_out_star"), path)
    if "a" in d and ("a_mo" in d or "a_mi" in d):
        raise ConfigError(f"{path}: give either a or a_mo/a_mi, not both")
    if "a_mo" in d or "a_mi" in d:
        a_mo = _num(d, "a_mo", path, 0.0)
        a_mi = _num(d, "a_mi", path, 0.0)
    else:
        a = _num(d, "a", path)
        if a is None:
            raise ConfigError(f"{path}: cell needs a (or a_mo/a_mi)")
        a_mo = a_mi = a
    try:
        params = MagnetoElasticParams(
            a_mo=a_mo, a_mi=a_mi,
            z1_star=_num(d, "z1_star", path, model.z1_star),
            z_in_star=_num(d, "z_in_star", path, model.z_in_star),
            z_out_star=_num(d, "z_out_star", path, model.z_out_star))
        return Cell(params=params, length=_num(d, "length", path, 1.0))
    except (ValueError, ConfigError) as e:
        raise ConfigError(f"{path}: {e}") from e


def _parse_chain(d, model, path):
    if isinstance(d, str):
        d = {"preset": d}
    d = _as_mapping(d, path)
    _reject_unknown(d, ("preset", "cells", "conductance_coefficient",
                        "leak_height", "mobility", "reservoir_pressure_in",
                        "reservoir_pressure_out"), path)
    if ("preset" in d) == ("cells" in d):
        raise ConfigError(f"{path}: give exactly one of preset or cells")
    kwargs = {}
    for key in ("conductance_coefficient", "leak_height", "mobility",
                "reservoir_pressure_in", "reservoir_pressure_out"):
        if key in d:
            kwargs[key] = _num(d, key, path)
    try:
        if "preset" in d:
            return chain_preset(str(d["preset"]), **kwargs)
        cells_raw = d["cells"]
        if not isinstance(cells_raw, list):
            raise ConfigError(f"{path}.cells must be a list")
        cells = tuple(_parse_cell(c, model, f"{path}.cells[{i}]")
                      for i, c in enumerate(cells_raw))
        return ChainConfig(cells=cells, **kwargs)
    except ConfigError:
        raise
    except ValueError as e:
        raise ConfigError(f"{path}: {e}") from e


def _parse_waveform(d, path):
    if isinstance(d, str):
        d = {"preset": d}
    d = _as_mapping(d, path)
    _reject_unknown(d, ("preset", "square", "knots", "period",
                        "p_max", "p_min"), path)
    spec_keys = [k for k in ("preset", "square", "knots") if k in d]
    if len(spec_keys) != 1:
        raise ConfigError(f"{path}: give exactly one of preset, square or "
                          f"knots (got {spec_keys or 'none'})")
    kind = spec_keys[0]
    try:
        if kind == "preset":
            for k in ("square", "knots", "period"):
                if k in d:
                    raise ConfigError(f"{path}.{k} not valid with a preset")
            return waveform_preset(str(d["preset"]),
                                   p_max=_num(d, "p_max", path, 7.0),
                                   p_min=_num(d, "p_min", path, 1.0))
        if kind == "square":
            sq = _as_mapping(d["square"], f"{path}.square")
            _reject_unknown(sq, ("period", "p_high", "p_low",
                                 "ramp_fraction"), f"{path}.square")
            return make_square(
                period=_num(sq, "period", f"{path}.square", 1.0),
                p_high=_num(sq, "p_high", f"{path}.square", 7.0),
                p_low=_num(sq, "p_low", f"{path}.square", -1.0),
                ramp_fraction=_num(sq, "ramp_fraction", f"{path}.square", 0.0))
        knots_raw = d["knots"]
        if not (isinstance(knots_raw, list) and knots_raw
                and all(isinstance(k, list) and len(k) == 2 for k in knots_raw)):
            raise ConfigError(f"{path}.knots must be a list of [time, pressure] pairs")
        period = _num(d, "period", path)
        if period is None:
            raise ConfigError(f"{path}: knots waveform needs a period")
        return Waveform(knots=tuple((float(t), float(p)) for t, p in knots_raw),
                        period=period)
    except ConfigError:
        raise
    except ValueError as e:
        raise ConfigError(f"{path}: {e}") from e


def _parse_numerics(d, path):
    d = _as_mapping(d, path)
    _reject_unknown(d, ("dt", "duration", "n_cycles", "samples_per_cycle",
                        "sweep_cap"), path)
    kwargs = {}
    for key in ("dt", "duration"):
        if key in d:
            kwargs[key] = _num(d, key, path)
    for key in ("n_cycles", "samples_per_cycle", "sweep_cap"):
        if key in d:
            v = d[key]
            if isinstance(v, bool) or not isinstance(v, int):
                raise ConfigError(f"{path}.{key} must be an integer, got {v!r}")
            kwargs[key] = v
    return Numerics(**kwargs)


def _parse_analyze(d, path):
    d = _as_mapping(d, path)
    _reject_unknown(d, ("a_values", "n_samples"), path)
    kwargs = {}
    if "a_values" in d:
        vals = d["a_values"]
        if not isinstance(vals, list):
            raise ConfigError(f"{path}.a_values must be a list")
        kwargs["a_values"] = tuple(
            _num({"v": v}, "v", f"{path}.a_values[{i}]")
            for i, v in enumerate(vals))
    if "n_samples" in d:
        v = d["n_samples"]
        if isinstance(v, bool) or not isinstance(v, int):
            raise ConfigError(f"{path}.n_samples must be an integer, got {v!r}")
        kwargs["n_samples"] = v
    return AnalyzeSpec(**kwargs)


def _parse_sweep(d, path):
    d = _as_mapping(d, path)
    _reject_unknown(d, ("metric", "axes"), path)
    if "metric" not in d:
        raise ConfigError(f"{path}: sweep needs a metric")
    axes_raw = _as_mapping(d.get("axes"), f"{path}.axes")
    if not axes_raw:
        raise ConfigError(f"{path}.axes must name at least one axis")
    axes = []
    for name, vals in axes_raw.items():
        if not isinstance(vals, list):
            raise ConfigError(f"{path}.axes.{name} must be a list of numbers")
        axes.append((str(name), tuple(
            _num({"v": v}, "v", f"{path}.axes.{name}[{i}]")
            for i, v in enumerate(vals))))
    return SweepSpec(metric=str(d["metric"]), axes=tuple(axes))


def parse_config(text: str) -> RunConfig:
    """Parse and validate the YAML config text, applying all defaults."""
    try:
        raw = yaml.safe_load(text)
    except yaml.YAMLError as e:
        raise ConfigError(f"config is not valid YAML: {e}") from e
    raw = _as_mapping(raw, "config")
    _reject_unknown(raw, ("model", "model_dimensional", "chain", "waveform",
                          "numerics", "analyze", "sweep", "output"), "config")
    if "model" in raw and "model_dimensional" in raw:
        raise ConfigError("give exactly one of model or model_dimensional, "
                          "not both")
    if "model_dimensional" in raw:
        model = _parse_model_dimensional(raw["model_dimensional"],
                                         "model_dimensional")
    else:
        model = _parse_model(raw.get("model"), "model")
    chain = _parse_chain(raw.get("chain", "asym-2cell"), model, "chain")
    waveform = _parse_waveform(raw.get("waveform", "trapezoid"), "waveform")
    numerics = _parse_numerics(raw.get("numerics"), "numerics")
    analyze = _parse_analyze(raw.get("analyze"), "analyze")
    sweep = _parse_sweep(raw["sweep"], "sweep") if "sweep" in raw else None
    if sweep is not None and sweep.n_points() > numerics.sweep_cap:
        raise ConfigError(f"sweep grid has {sweep.n_points()} points, over "
                          f"the cap of {numerics.sweep_cap}")
    out = _as_mapping(raw.get("output"), "output")
    _reject_unknown(out, ("directory",), "output")
    output_dir = str(out.get("directory", "out"))
    return RunConfig(model=model, chain=chain, waveform=waveform,
                     numerics=numerics, analyze=analyze, sweep=sweep,
                     output_dir=output_dir)


def load_config(path: str) -> RunConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_config(fh.read())


def _cell_dict(cell: Cell) -> dict:
    p = cell.params
    return {"a_mo": p.a_mo, "a_mi": p.a_mi, "z1_star": p.z1_star,
            "z_in_star": p.z_in_star, "z_out_star": p.z_out_star,
            "length": cell.length}


def serialize_config(cfg: RunConfig) -> str:
    """Canonical expanded YAML; parse_config round-trips it exactly."""
    m = cfg.model
    ch = cfg.chain
    doc = {
        "model": {"a_mo": m.a_mo, "a_mi": m.a_mi, "z1_star": m.z1_star,
                  "z_in_star": m.z_in_star, "z_out_star": m.z_out_star},
        "chain": {
            "cells": [_cell_dict(c) for c in ch.cells],
            "conductance_coefficient": ch.conductance_coefficient,
            "leak_height": ch.leak_height,
            "mobility": ch.mobility,
            "reservoir_pressure_in": ch.reservoir_pressure_in,
            "reservoir_pressure_out": ch.reservoir_pressure_out,
        },
        "waveform": {
            "knots": [[t, p] for t, p in cfg.waveform.knots],
            "period": cfg.waveform.period,
        },
        "numerics": {
            "dt": cfg.numerics.dt,
            "duration": cfg.numerics.duration,
            "n_cycles": cfg.numerics.n_cycles,
            "samples_per_cycle": cfg.numerics.samples_per_cycle,
            "sweep_cap": cfg.numerics.sweep_cap,
        },
        "analyze": {
            "a_values": list(cfg.analyze.a_values),
            "n_samples": cfg.analyze.n_samples,
        },
        "output": {"directory": cfg.output_dir},
    }
    if cfg.numerics.duration is None:
        del doc["numerics"]["duration"]
    if cfg.sweep is not None:
        doc["sweep"] = {"metric": cfg.sweep.metric,
                        "axes": {n: list(vs) for n, vs in cfg.sweep.axes}}
    return yaml.safe_dump(doc, sort_keys=False, default_flow_style=None)
