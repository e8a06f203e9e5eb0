"""Multi-cell peristaltic pump on a lumped incompressible hydraulic network.

Each cell is one membrane (cycle-module contact rules) suspended over a fluid
channel segment.  The channel pressure P_i under a membrane shifts its
effective actuation pressure to p_pneu - P_i, and the membrane rate follows
overdamped relaxation toward equilibrium:

    dz_i/dt = -mobility * (p_pneu - P_i - p*(z_i))

Neighbouring segments exchange fluid through interfaces whose conductance is
g_j = c * h_j^3 (parallel-plate lubrication), where h_j is the smaller of the
two adjacent hydraulic openings z - z_in_star, floored at leak_height so a
closed cell still leaks slightly.  The node balance

    sum_j g_j (P_neighbour - P_i) = length_i * dz_i/dt

couples all cells through a tridiagonal system each time step.

The step is semi-implicit with an active set: cells latched on a wall, and
cells whose trial move crosses a wall inside the step, enter the solve as
fixed-rate sources; all other cells contribute a pressure-linear rate.  The
active set is re-derived from the solved pressures until both the pressures
and the set are stationary.  Because the applied rates are exactly the rates
the final solve assumed, the discrete balance

    inflow - outflow = d/dt sum_i length_i * z_i

holds to round-off at every step, which is what makes the mass-conservation
checks sharp instead of merely approximate.
"""

from __future__ import annotations

from dataclasses import dataclass

from .cycle import Wall, initial_state
from .errors import ConfigError, StepError
from .model import MagnetoElasticParams, pressure_star
from .waveforms import Waveform

__all__ = ["Cell", "ChainConfig", "FlowRecord", "CellChain", "build_chain",
           "run", "net_flow_metrics", "event_times", "chain_preset",
           "CHAIN_PRESETS"]

_COUPLING_TOL = 1e-10
_RATE_TOL = 1e-12     # additional stationarity demand on membrane rates
_COUPLING_CAP = 50
_RELAX = 0.7          # under-relaxation on pressures if the residual grows
_WALL_SNAP = 1e-15    # band for treating a trial position as on the wall


@dataclass(frozen=True)
class Cell:
    """One membrane cell: its equilibrium landscape and axial extent."""

    params: MagnetoElasticParams
    length: float = 1.0

    def __post_init__(self):
        if not self.length > 0.0:
            raise ConfigError(f"cell length must be > 0, got {self.length}")


@dataclass(frozen=True)
class ChainConfig:
    """Chain of >= 2 cells plus the hydraulic coupling constants.

    leak_height is the minimum effective interface opening; it encodes the
    residual gap that keeps a nominally closed cell slightly conductive and
    must stay below every cell's full opening range.
    """

    cells: tuple
    conductance_coefficient: float = 1000.0
    leak_height: float = 0.05
    mobility: float = 10.0
    reservoir_pressure_in: float = 0.0
    reservoir_pressure_out: float = 0.0

    def __post_init__(self):
        cells = tuple(self.cells)
        object.__setattr__(self, "cells", cells)
        if len(cells) < 2:
            raise ConfigError(f"chain needs >= 2 cells, got {len(cells)}")
        for c in cells:
            if not isinstance(c, Cell):
                raise ConfigError(f"cells must be Cell instances, got {type(c)}")
        if not self.conductance_coefficient > 0.0:
            raise ConfigError("conductance_coefficient must be > 0, got "
                              f"{self.conductance_coefficient}")
        gap = min(c.params.z_out_star - c.params.z_in_star for c in cells)
        if not 0.0 < self.leak_height < gap:
            raise ConfigError("leak_height must satisfy 0 < leak_height < "
                              f"{gap} (smallest opening range), got "
                              f"{self.leak_height}")
        if not self.mobility > 0.0:
            raise ConfigError(f"mobility must be > 0, got {self.mobility}")


@dataclass(frozen=True)
class FlowRecord:
    """State snapshot after one step.

    inflow is positive into the tube at the inlet, outflow positive out of
    the tube at the outlet.  accumulated_flow integrates (inflow+outflow)/2
    and volume_conveyed integrates outflow, both by the trapezoid rule over
    the sampled rates.
    """

    t: float
    p_pneu: float
    inflow: float
    outflow: float
    accumulated_flow: float
    volume_conveyed: float
    z_star: tuple
    cell_pressures: tuple
    walls: tuple


def _thomas(lower, diag, upper, rhs):
    """Tridiagonal solve (Thomas algorithm); lower[0] and upper[-1] unused."""
    n = len(rhs)
    cp = [0.0] * n
    dp = [0.0] * n
    cp[0] = upper[0] / diag[0]
    dp[0] = rhs[0] / diag[0]
    for i in range(1, n):
        m = diag[i] - lower[i] * cp[i - 1]
        cp[i] = upper[i] / m if i < n - 1 else 0.0
        dp[i] = (rhs[i] - lower[i] * dp[i - 1]) / m
    x = [0.0] * n
    x[-1] = dp[-1]
    for i in range(n - 2, -1, -1):
        x[i] = dp[i] - cp[i] * x[i + 1]
    return x


def _solve_node_pressures(g, lengths, fixed_rate, free_coeff, free_base,
                          p_res_in, p_res_out):
    """Pressures P_i from the node balance sum g_j (P_nb - P_i) = length_i*rate_i.

    g has n+1 interface conductances.  Per cell either fixed_rate[i] is the
    imposed rate (free_coeff[i] is None), or the rate is pressure-linear,
    rate_i = free_base[i] + free_coeff[i]*P_i.  Works for any n >= 1.
    """
    n = len(lengths)
    lower = [0.0] * n
    diag = [0.0] * n
    upper = [0.0] * n
    rhs = [0.0] * n
    for i in range(n):
        gl, gr = g[i], g[i + 1]
        diag[i] = -(gl + gr)
        if i > 0:
            lower[i] = gl
        else:
            rhs[i] -= gl * p_res_in
        if i < n - 1:
            upper[i] = gr
        else:
            rhs[i] -= gr * p_res_out
        if free_coeff[i] is None:
            rhs[i] += lengths[i] * fixed_rate[i]
        else:
            diag[i] += lengths[i] * free_coeff[i]
            rhs[i] += lengths[i] * free_base[i]
    return _thomas(lower, diag, upper, rhs)


class CellChain:
    """Mutable pump state: positions, wall latches, running flow integrals."""

    def __init__(self, config: ChainConfig):
        self.config = config
        self.t = 0.0
        self.z = []
        self.walls = []
        for cell in config.cells:
            st = initial_state(cell.params)
            self.z.append(st.z_star)
            self.walls.append(st.wall)
        # cached per-cell constants for the hot loop
        self._a_mo = [c.params.a_mo for c in config.cells]
        self._a_mi = [c.params.a_mi for c in config.cells]
        self._z1 = [c.params.z1_star for c in config.cells]
        self._z_in = [c.params.z_in_star for c in config.cells]
        self._z_out = [c.params.z_out_star for c in config.cells]
        self._len = [c.length for c in config.cells]
        self._p_th_in = [pressure_star(c.params.z_in_star, c.params)
                         for c in config.cells]
        self._p_th_out = [pressure_star(c.params.z_out_star, c.params)
                          for c in config.cells]
        self._acc_flow = 0.0
        self._vol_conveyed = 0.0
        self._rate_in_prev = 0.0
        self._rate_out_prev = 0.0
        self._p_pneu = 0.0
        self._inflow = 0.0
        self._outflow = 0.0
        self._cell_p = [0.0] * len(config.cells)

    def _pstar(self, i, z):
        return (1.0 - z + self._a_mo[i] / (self._z1[i] - z) ** 3
                - self._a_mi[i] / (8.0 * z ** 3))

    def total_volume(self) -> float:
        return sum(l * z for l, z in zip(self._len, self.z))

    def record(self) -> FlowRecord:
        return FlowRecord(
            t=self.t, p_pneu=self._p_pneu,
            inflow=self._inflow, outflow=self._outflow,
            accumulated_flow=self._acc_flow,
            volume_conveyed=self._vol_conveyed,
            z_star=tuple(self.z),
            cell_pressures=tuple(self._cell_p),
            walls=tuple(self.walls))

    def step(self, waveform: Waveform, dt: float) -> FlowRecord:
        """Advance one time step; returns the post-step FlowRecord."""
        if not dt > 0.0:
            raise ConfigError(f"dt must be > 0, got {dt}")
        cfg = self.config
        n = len(cfg.cells)
        t_new = self.t + dt
        p_pn = waveform.pressure_at(t_new)
        mu = cfg.mobility
        c3 = cfg.conductance_coefficient
        h_leak = cfg.leak_height
        z = self.z
        walls = self.walls

        P = [0.0] * n
        zs = list(z)                 # trial end-of-step positions
        fixed = [None] * n           # imposed rate where not None
        rate_prev = None
        res_prev = None
        g = None
        converged = False
        res = 0.0
        for it in range(_COUPLING_CAP):
            # interface conductances from midpoint hydraulic openings
            w = [0.5 * (z[i] + zs[i]) - self._z_in[i] for i in range(n)]
            h = [0.0] * (n + 1)
            h[0] = max(w[0], h_leak)
            h[n] = max(w[n - 1], h_leak)
            for j in range(1, n):
                h[j] = max(min(w[j - 1], w[j]), h_leak)
            g = [c3 * hh ** 3 for hh in h]
            free_coeff = [None] * n
            free_base = [0.0] * n
            fixed_rate = [0.0] * n
            for i in range(n):
                if fixed[i] is not None:
                    fixed_rate[i] = fixed[i]
                else:
                    ps = self._pstar(i, 0.5 * (z[i] + zs[i]))
                    # rate = -mu*(p_pn - P_i - ps) is linear in P_i
                    free_coeff[i] = -mu
                    free_base[i] = -mu * (p_pn - ps)
            Pn = _solve_node_pressures(g, self._len, fixed_rate, free_coeff,
                                       free_base, cfg.reservoir_pressure_in,
                                       cfg.reservoir_pressure_out)
            res = max(abs(Pn[i] - P[i]) for i in range(n))
            if res_prev is not None and res > res_prev:
                Pn = [_RELAX * pn + (1.0 - _RELAX) * po
                      for pn, po in zip(Pn, P)]
                res = max(abs(Pn[i] - P[i]) for i in range(n))
            # re-derive the active set from the new pressures
            fixed_new = [None] * n
            zs_new = [0.0] * n
            rate_new = [0.0] * n
            for i in range(n):
                p_eff = p_pn - Pn[i]
                if walls[i] is Wall.OUTER and p_eff <= self._p_th_out[i]:
                    fixed_new[i] = 0.0
                    zs_new[i] = z[i]
                    continue
                if walls[i] is Wall.INNER and p_eff >= self._p_th_in[i]:
                    fixed_new[i] = 0.0
                    zs_new[i] = z[i]
                    continue
                ps = self._pstar(i, 0.5 * (z[i] + zs[i]))
                rate = -mu * (p_pn - Pn[i] - ps)
                zt = z[i] + dt * rate
                if zt < self._z_in[i]:
                    zs_new[i] = self._z_in[i]
                    fixed_new[i] = (self._z_in[i] - z[i]) / dt
                    rate_new[i] = fixed_new[i]
                elif zt > self._z_out[i]:
                    zs_new[i] = self._z_out[i]
                    fixed_new[i] = (self._z_out[i] - z[i]) / dt
                    rate_new[i] = fixed_new[i]
                else:
                    zs_new[i] = zt
                    rate_new[i] = rate
            set_changed = any(
                (a is None) != (b is None) or
                (a is not None and abs(a - b) > 1e-14)
                for a, b in zip(fixed_new, fixed))
            rate_settled = rate_prev is not None and not set_changed and max(
                abs(a - b) for a, b in zip(rate_new, rate_prev)) < _RATE_TOL
            P, zs, fixed, rate_prev = Pn, zs_new, fixed_new, rate_new
            if res < _COUPLING_TOL and rate_settled and it > 0:
                converged = True
                break
            # a set change restarts the residual history: the jump it causes
            # is not an oscillation, and blending across it poisons exactness
            res_prev = None if set_changed else res
        if not converged:
            raise StepError("pressure coupling did not converge",
                            t=t_new, residual=res)

        # contact latch update from the effective pressures
        for i in range(n):
            p_eff = p_pn - P[i]
            if zs[i] <= self._z_in[i] + _WALL_SNAP and p_eff >= self._p_th_in[i]:
                walls[i] = Wall.INNER
                zs[i] = self._z_in[i]
            elif zs[i] >= self._z_out[i] - _WALL_SNAP and p_eff <= self._p_th_out[i]:
                walls[i] = Wall.OUTER
                zs[i] = self._z_out[i]
            else:
                walls[i] = Wall.INTERIOR
        inflow = g[0] * (cfg.reservoir_pressure_in - P[0])
        outflow = g[n] * (P[n - 1] - cfg.reservoir_pressure_out)

        self.z = zs
        self.t = t_new
        self._acc_flow += 0.5 * dt * (
            0.5 * (self._rate_in_prev + self._rate_out_prev)
            + 0.5 * (inflow + outflow))
        self._vol_conveyed += 0.5 * dt * (self._rate_out_prev + outflow)
        self._rate_in_prev = inflow
        self._rate_out_prev = outflow
        self._p_pneu = p_pn
        self._inflow = inflow
        self._outflow = outflow
        self._cell_p = P
        return self.record()


def build_chain(config: ChainConfig) -> CellChain:
    """Chain with every cell at its zero-pressure rest state.

    Rest positions are resolved to full precision so a run with no actuation
    and equal reservoirs stays stationary to round-off.
    """
    return CellChain(config)


def run(config: ChainConfig, waveform: Waveform, duration: float,
        dt: float = 1e-4) -> list:
    """Time series of FlowRecord over duration, starting at rest.

    The first record is the initial state at t=0 with zero rates.  Requires
    at least one full waveform period and dt <= period/1000 so contact events
    are resolved.
    """
    if duration < waveform.period:
        raise ConfigError(f"duration {duration} shorter than one waveform "
                          f"period {waveform.period}")
    if dt > waveform.period / 1000.0:
        raise ConfigError(f"dt {dt} too coarse; need dt <= period/1000 = "
                          f"{waveform.period / 1000.0}")
    chain = build_chain(config)
    chain._p_pneu = waveform.pressure_at(0.0)
    records = [chain.record()]
    n_steps = round(duration / dt)
    for _ in range(n_steps):
        records.append(chain.step(waveform, dt))
    return records


def _index_at(series, t_target):
    """Index of the first record with t >= t_target (tolerant to round-off)."""
    lo, hi = 0, len(series) - 1
    eps = 1e-9 * max(1.0, abs(t_target))
    while lo < hi:
        mid = (lo + hi) // 2
        if series[mid].t < t_target - eps:
            lo = mid + 1
        else:
            hi = mid
    return lo


def net_flow_metrics(series: list, period: float) -> dict:
    """Flow summary of a run.

    Returns the sampled times, the two running integrals carried by the
    records (accumulated_flow is the mean of inflow and outflow integrated in
    time, volume_conveyed the integral of outflow), and net_volume_per_cycle,
    the volume conveyed over the last full period.
    """
    if not series or series[-1].t - series[0].t < period - 1e-12:
        raise ValueError("series shorter than one waveform period")
    t_last = series[-1].t
    k = _index_at(series, t_last - period)
    return {
        "t": [r.t for r in series],
        "accumulated_flow": [r.accumulated_flow for r in series],
        "volume_conveyed": [r.volume_conveyed for r in series],
        "net_volume_per_cycle":
            series[-1].volume_conveyed - series[k].volume_conveyed,
    }


def event_times(series: list, period: float) -> list:
    """Per-cell, per-cycle inner-wall contact timing.

    For each cell and each full cycle window [k*period, (k+1)*period) returns
    {"closure_time": first instant the wall state becomes inner contact,
    "detach_time": first instant it leaves inner contact}; None where the
    event does not occur in that window.
    """
    if not series:
        return []
    n_cells = len(series[0].walls)
    t0 = series[0].t
    t_end = series[-1].t
    n_cycles = int((t_end - t0 + 1e-12) // period)
    out = []
    for i in range(n_cells):
        per_cycle = [{"closure_time": None, "detach_time": None}
                     for _ in range(n_cycles)]
        for k in range(1, len(series)):
            was = series[k - 1].walls[i] is Wall.INNER
            now = series[k].walls[i] is Wall.INNER
            if was == now:
                continue
            t = series[k].t
            cyc = int((t - t0 - 1e-12) // period)
            if not 0 <= cyc < n_cycles:
                continue
            slot = per_cycle[cyc]
            if now and slot["closure_time"] is None:
                slot["closure_time"] = t
            elif was and slot["detach_time"] is None:
                slot["detach_time"] = t
        out.append(per_cycle)
    return out


CHAIN_PRESETS = ("asym-2cell", "sym-2cell", "graded-5cell")


def chain_preset(name: str, **overrides) -> ChainConfig:
    """Named chain layouts.

    asym-2cell: plain left cell (a=0) and hysteretic right cell (a=0.1), the
    minimal pump that rectifies a symmetric pressure cycle into forward flow.
    sym-2cell: both cells plain; the control case with no net flow.
    graded-5cell: magnet coefficient rising linearly 0 to 0.1 left to right.
    Keyword overrides are passed through to ChainConfig.
    """
    if name == "asym-2cell":
        a_list = [0.0, 0.1]
    elif name == "sym-2cell":
        a_list = [0.0, 0.0]
    elif name == "graded-5cell":
        a_list = [0.025 * k for k in range(5)]
    else:
        raise ConfigError(f"unknown chain preset {name!r}; "
                          f"known: {', '.join(CHAIN_PRESETS)}")
    cells = tuple(Cell(params=MagnetoElasticParams.symmetric(a)) for a in a_list)
    return ChainConfig(cells=cells, **overrides)
