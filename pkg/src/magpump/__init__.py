"""Reduced-order simulation of a magnet-latched membrane peristaltic pump.

Layers, bottom up:

  model      dimensionless equilibrium landscape p*(z*) of one membrane
             between two magnets, its stationary points, stability and the
             critical magnet coefficient
  waveforms  periodic piecewise-linear pneumatic pressure schedules
  cycle      quasi-static hysteresis cycle with contact latching and
             snap-through events; loop area
  pump       chain of cells coupled through a lubrication flow network;
             net transport metrics and contact event timing
  config     YAML run configuration for the command line tools
  report     deterministic CSV and minimal SVG output
  cli        magpump analyze | cycle | pump | sweep
"""

from .config import (AnalyzeSpec, Numerics, RunConfig, SweepSpec, load_config,
                     parse_config, serialize_config)
from .cycle import (CycleState, CycleTrace, SnapEvent, Wall, contact_force,
                    initial_state, loop_area, loop_polygon, step_quasi_static,
                    trace_cycle)
from .errors import ConfigError, NumericError, StepError
from .model import (DimensionalParams, EquilibriumRoot, MagnetoElasticParams,
                    StationaryPoint, critical_coefficient,
                    equilibria_at_pressure, nondimensionalize,
                    pressure_dimensional, pressure_star, pressure_star_slope,
                    stationary_points)
from .pump import (CHAIN_PRESETS, Cell, CellChain, ChainConfig, FlowRecord,
                   build_chain, chain_preset, event_times, net_flow_metrics,
                   run)
from .waveforms import (WAVEFORM_PRESETS, Waveform, make_square,
                        make_trapezoid, waveform_preset)

__version__ = "0.1.0"

__all__ = [
    "AnalyzeSpec", "Numerics", "RunConfig", "SweepSpec", "load_config",
    "parse_config", "serialize_config",
    "CycleState", "CycleTrace", "SnapEvent", "Wall", "contact_force",
    "initial_state", "loop_area", "loop_polygon", "step_quasi_static",
    "trace_cycle",
    "ConfigError", "NumericError", "StepError",
    "DimensionalParams", "EquilibriumRoot", "MagnetoElasticParams",
    "StationaryPoint", "critical_coefficient", "equilibria_at_pressure",
    "nondimensionalize", "pressure_dimensional", "pressure_star",
    "pressure_star_slope", "stationary_points",
    "CHAIN_PRESETS", "Cell", "CellChain", "ChainConfig", "FlowRecord",
    "build_chain", "chain_preset", "event_times", "net_flow_metrics", "run",
    "WAVEFORM_PRESETS", "Waveform", "make_square", "make_trapezoid",
    "waveform_preset",
    "__version__",
]
