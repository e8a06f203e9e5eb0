"""Command-line surface: analyze | cycle | pump | sweep.

Each command reads one YAML config (see config module for the format), writes
CSV files into the output directory, and optionally renders SVG plots with
--svg.  Exit codes: 0 success, 2 configuration error, 3 numeric failure;
diagnostics go to standard error.
"""

from __future__ import annotations

import argparse
import itertools
import os
import sys
from dataclasses import replace

import numpy as np

from .config import RunConfig, load_config
from .cycle import Wall, contact_force, loop_area, loop_polygon, trace_cycle
from .errors import ConfigError, NumericError, StepError
from .model import (MagnetoElasticParams, critical_coefficient, pressure_star,
                    stationary_points)
from .pump import Cell, event_times, net_flow_metrics
from .pump import run as pump_run
from .report import svg_line_plot, write_csv
from .waveforms import make_square

__all__ = ["main"]


def _model_family(base: MagnetoElasticParams, a: float) -> MagnetoElasticParams:
    """Symmetric-coefficient variant of the base model geometry."""
    return MagnetoElasticParams(a_mo=a, a_mi=a, z1_star=base.z1_star,
                                z_in_star=base.z_in_star,
                                z_out_star=base.z_out_star)


def cmd_analyze(cfg: RunConfig, out_dir: str, svg: bool) -> None:
    model = cfg.model
    span = model.z1_star - model.z_in_star
    z_hi = model.z1_star - 1e-3 * span  # stay clear of the magnet singularity
    zs = np.linspace(model.z_in_star, z_hi, cfg.analyze.n_samples)
    curve_rows = []
    stat_rows = []
    svg_series = []
    for a in cfg.analyze.a_values:
        params = _model_family(model, a)
        ps = pressure_star(zs, params)
        curve_rows.extend((a, float(z), float(p)) for z, p in zip(zs, ps))
        pts = stationary_points(params)
        maxima = [s for s in pts if s.kind == "max"]
        minima = [s for s in pts if s.kind == "min"]
        stat_rows.append((
            a, len(pts),
            maxima[0].z_star if maxima else None,
            maxima[0].p_star if maxima else None,
            minima[0].z_star if minima else None,
            minima[0].p_star if minima else None,
        ))
        band = zs <= model.z_out_star  # plot only the wall band; the curve
        svg_series.append((f"a={a:g}",   # diverges toward z1* and would
                           list(zs[band]),  # flatten everything else
                           [float(v) for v in np.asarray(ps)[band]]))
    a_crit = critical_coefficient(model.z1_star)
    write_csv(os.path.join(out_dir, "analyze_curves.csv"),
              ["a", "z_star", "p_star"], curve_rows)
    write_csv(os.path.join(out_dir, "analyze_stationary.csv"),
              ["a", "n_stationary", "z_star_max", "p_star_max",
               "z_star_min", "p_star_min"], stat_rows)
    write_csv(os.path.join(out_dir, "analyze_acrit.csv"),
              ["z1_star", "a_crit"], [(model.z1_star, a_crit)])
    if svg:
        svg_line_plot(os.path.join(out_dir, "analyze_curves.svg"), svg_series,
                      "Equilibrium pressure landscape", "z*", "p*(z*)")


def cmd_cycle(cfg: RunConfig, out_dir: str, svg: bool) -> None:
    params = cfg.model
    trace = trace_cycle(params, cfg.waveform,
                        n_cycles=cfg.numerics.n_cycles,
                        samples_per_cycle=cfg.numerics.samples_per_cycle)
    area = loop_area(trace)
    rows = []
    for t, st in zip(trace.times, trace.states):
        force = None if st.wall is Wall.INTERIOR else contact_force(st, params)
        rows.append((t, st.p_applied, st.z_star, st.wall.value, force))
    write_csv(os.path.join(out_dir, "cycle_trace.csv"),
              ["t", "p_applied", "z_star", "wall_state", "contact_force"],
              rows)
    write_csv(os.path.join(out_dir, "cycle_events.csv"),
              ["t", "p_applied", "z_star_from", "z_star_to"],
              [(e.t, e.p_applied, e.z_star_from, e.z_star_to)
               for e in trace.snap_events])
    t_last = (cfg.numerics.n_cycles - 1) * trace.period
    n_last = sum(1 for e in trace.snap_events if e.t > t_last)
    write_csv(os.path.join(out_dir, "cycle_summary.csv"),
              ["loop_area", "snap_events_last_cycle", "outer_peel_pressure",
               "inner_detach_pressure"],
              [(area, n_last,
                pressure_star(params.z_out_star, params),
                pressure_star(params.z_in_star, params))])
    if svg:
        poly = loop_polygon(trace)
        poly.append(poly[0])
        svg_line_plot(os.path.join(out_dir, "cycle_loop.svg"),
                      [("", [p[0] for p in poly], [p[1] for p in poly])],
                      "Hysteresis loop (last cycle)", "z*", "applied p*")


def cmd_pump(cfg: RunConfig, out_dir: str, svg: bool) -> None:
    period = cfg.waveform.period
    records = pump_run(cfg.chain, cfg.waveform, cfg.duration(),
                       dt=cfg.numerics.dt)
    n = len(cfg.chain.cells)
    header = ["t", "p_pneu", "inflow", "outflow", "accumulated_flow",
              "volume_conveyed"]
    header += [f"z_star_{i}" for i in range(n)]
    header += [f"cell_pressure_{i}" for i in range(n)]
    header += [f"wall_{i}" for i in range(n)]
    rows = []
    for r in records:
        row = [r.t, r.p_pneu, r.inflow, r.outflow, r.accumulated_flow,
               r.volume_conveyed]
        row += list(r.z_star) + list(r.cell_pressures)
        row += [w.value for w in r.walls]
        rows.append(row)
    write_csv(os.path.join(out_dir, "pump_timeseries.csv"), header, rows)

    ev = event_times(records, period)
    ev_rows = []
    for i, cycles in enumerate(ev):
        for k, slot in enumerate(cycles):
            ev_rows.append((i, k, slot["closure_time"], slot["detach_time"]))
    write_csv(os.path.join(out_dir, "pump_events.csv"),
              ["cell", "cycle", "closure_time", "detach_time"], ev_rows)

    metrics = net_flow_metrics(records, period)
    t_end = records[-1].t
    last = [r for r in records if r.t > t_end - period + 1e-12]
    backflow_in = any(r.inflow < 0.0 for r in last if r.p_pneu > 0.0)
    backflow_out = any(r.outflow < 0.0 for r in last if r.p_pneu < 0.0)
    write_csv(os.path.join(out_dir, "pump_summary.csv"),
              ["net_volume_per_cycle", "inflow_negative_while_pressurized",
               "outflow_negative_while_depressurized", "min_inflow",
               "max_inflow", "min_outflow", "max_outflow",
               "final_accumulated_flow", "final_volume_conveyed"],
              [(metrics["net_volume_per_cycle"], backflow_in, backflow_out,
                min(r.inflow for r in records),
                max(r.inflow for r in records),
                min(r.outflow for r in records),
                max(r.outflow for r in records),
                records[-1].accumulated_flow,
                records[-1].volume_conveyed)])
    if svg:
        ts = [r.t for r in records]
        svg_line_plot(os.path.join(out_dir, "pump_flows.svg"),
                      [("inflow", ts, [r.inflow for r in records]),
                       ("outflow", ts, [r.outflow for r in records])],
                      "Boundary flow rates", "t", "flow rate")
        svg_line_plot(os.path.join(out_dir, "pump_volumes.svg"),
                      [("accumulated", ts,
                        [r.accumulated_flow for r in records]),
                       ("conveyed", ts,
                        [r.volume_conveyed for r in records])],
                      "Running flow integrals", "t", "volume")


def _sweep_waveform(cfg: RunConfig, pt: dict):
    if "p_high" in pt or "p_low" in pt:
        return make_square(period=cfg.waveform.period,
                           p_high=pt.get("p_high", 7.0),
                           p_low=pt.get("p_low", -1.0))
    return cfg.waveform


def _sweep_metric(cfg: RunConfig, metric: str, pt: dict) -> float:
    model = cfg.model
    if metric == "a_crit_margin":
        z1 = pt.get("z1_star", model.z1_star)
        a = pt.get("a", model.a_mo)
        return critical_coefficient(z1) - a
    if metric == "loop_area":
        params = model
        if "z1_star" in pt:
            params = replace(params, z1_star=pt["z1_star"])
        if "a" in pt:
            params = _model_family(params, pt["a"])
        trace = trace_cycle(params, _sweep_waveform(cfg, pt),
                            n_cycles=cfg.numerics.n_cycles,
                            samples_per_cycle=cfg.numerics.samples_per_cycle)
        return loop_area(trace)
    # net_volume_per_cycle
    chain = cfg.chain
    for key in ("mobility", "leak_height", "conductance_coefficient"):
        if key in pt:
            chain = replace(chain, **{key: pt[key]})
    if "a" in pt:
        # the coefficient axis drives the rightmost (rectifying) cell
        last = chain.cells[-1]
        cells = chain.cells[:-1] + (
            Cell(params=_model_family(last.params, pt["a"]),
                 length=last.length),)
        chain = replace(chain, cells=cells)
    wave = _sweep_waveform(cfg, pt)
    duration = (cfg.numerics.duration if cfg.numerics.duration is not None
                else cfg.numerics.n_cycles * wave.period)
    records = pump_run(chain, wave, duration, dt=cfg.numerics.dt)
    return net_flow_metrics(records, wave.period)["net_volume_per_cycle"]


def cmd_sweep(cfg: RunConfig, out_dir: str, svg: bool) -> None:
    spec = cfg.sweep
    if spec is None:
        raise ConfigError("the sweep command needs a sweep block in the config")
    names = [n for n, _ in spec.axes]
    value_lists = [vs for _, vs in spec.axes]
    rows = []
    for combo in itertools.product(*value_lists):
        pt = dict(zip(names, combo))
        rows.append(tuple(combo) + (_sweep_metric(cfg, spec.metric, pt),))
    write_csv(os.path.join(out_dir, "sweep.csv"),
              names + [spec.metric], rows)
    if svg and len(names) == 1:
        svg_line_plot(os.path.join(out_dir, "sweep.svg"),
                      [(spec.metric, [r[0] for r in rows],
                        [r[1] for r in rows])],
                      f"{spec.metric} vs {names[0]}", names[0], spec.metric)


_COMMANDS = {
    "analyze": cmd_analyze,
    "cycle": cmd_cycle,
    "pump": cmd_pump,
    "sweep": cmd_sweep,
}


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="magpump",
        description="Reduced-order simulation of a magnet-latched membrane "
                    "pump: equilibrium analysis, hysteresis cycles, and "
                    "multi-cell peristaltic transport.")
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "analyze": "equilibrium curves, stationary points and the critical "
                   "magnet coefficient",
        "cycle": "quasi-static hysteresis cycle trace, snap events and loop "
                 "area",
        "pump": "multi-cell pump run: flow time series, contact events, net "
                "volume metrics",
        "sweep": "evaluate a metric over a cartesian parameter grid",
    }
    for name in _COMMANDS:
        p = sub.add_parser(name, help=helps[name])
        p.add_argument("--config", required=True, help="path to YAML config")
        p.add_argument("--out", default=None,
                       help="output directory (default: from config)")
        p.add_argument("--svg", action="store_true",
                       help="also render SVG plots")
    args = parser.parse_args(argv)
    try:
        try:
            cfg = load_config(args.config)
        except OSError as e:
            raise ConfigError(f"cannot read config {args.config}: {e}") from e
        out_dir = args.out if args.out is not None else cfg.output_dir
        os.makedirs(out_dir, exist_ok=True)
        _COMMANDS[args.command](cfg, out_dir, args.svg)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return 2
    except StepError as e:
        print(f"numeric failure: {e} (t={e.t}, residual={e.residual})",
              file=sys.stderr)
        return 3
    except NumericError as e:
        print(f"numeric failure: {e}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
