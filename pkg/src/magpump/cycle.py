"""Quasi-static hysteresis cycle of a latched membrane under slow actuation.

The membrane is pressure-controlled and inertialess: at every instant it sits
on a stable branch of the equilibrium curve p*(z*) or presses against one of
the contact walls.  Three rules generate the whole cycle:

  * OuterContact persists while p <= p*(z_out*); InnerContact persists while
    p >= p*(z_in*).  The contact force is the (non-negative) difference.
  * An interior state follows its stable branch continuously as the applied
    pressure changes.
  * When a branch ends (fold) or a contact force crosses zero, the membrane
    snaps at constant applied pressure to the nearest stable root in the
    direction of the net force, or to the wall if no such root exists.

Snap events are recorded at the exact threshold pressure, not at the sampled
pressure that first exceeded it, so event pressures are sampling-independent.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from .errors import NumericError
from .model import (MagnetoElasticParams, _bisect, pressure_star,
                    pressure_star_slope, stationary_points)
from .waveforms import Waveform

__all__ = ["Wall", "CycleState", "SnapEvent", "CycleTrace", "contact_force",
           "initial_state", "step_quasi_static", "trace_cycle",
           "loop_polygon", "loop_area"]

_ZTOL = 1e-12      # wall / segment coincidence tolerance
_EVENT_MIN = 1e-9  # below this travel a transition is continuous, not a snap


class Wall(enum.Enum):
    INTERIOR = "interior"
    INNER = "inner"
    OUTER = "outer"


@dataclass(frozen=True)
class CycleState:
    """Membrane position, contact status and the applied pressure."""

    z_star: float
    wall: Wall
    p_applied: float


@dataclass(frozen=True)
class SnapEvent:
    """Constant-pressure jump between branches (z_from != z_to)."""

    t: float
    p_applied: float
    z_star_from: float
    z_star_to: float


@dataclass
class CycleTrace:
    params: MagnetoElasticParams
    period: float
    samples_per_cycle: int
    n_cycles: int
    times: list = field(default_factory=list)
    states: list = field(default_factory=list)   # CycleState per sample
    snap_events: list = field(default_factory=list)


def contact_force(state: CycleState, params: MagnetoElasticParams) -> float:
    """Normal force per unit area holding the membrane on its wall.

    Positive while the contact persists; raises for interior states where no
    contact exists.
    """
    if state.wall is Wall.OUTER:
        return pressure_star(params.z_out_star, params) - state.p_applied
    if state.wall is Wall.INNER:
        return state.p_applied - pressure_star(params.z_in_star, params)
    raise ValueError("contact_force is undefined for an interior state")


class _Landscape:
    """Monotone-segment decomposition of p*(z*) between the walls.

    Segments are (z_lo, z_hi, p_lo_end, p_hi_end, stable) with stable True
    where the slope is negative (p* decreasing across the segment).
    """

    def __init__(self, params: MagnetoElasticParams):
        self.params = params
        self.z_in = params.z_in_star
        self.z_out = params.z_out_star
        self.p_in = pressure_star(self.z_in, params)    # inner detach threshold
        self.p_out = pressure_star(self.z_out, params)  # outer peel threshold
        cuts = [self.z_in]
        cuts += [s.z_star for s in stationary_points(params)
                 if self.z_in < s.z_star < self.z_out]
        cuts.append(self.z_out)
        self.segments = []
        for zl, zr in zip(cuts, cuts[1:]):
            zm = 0.5 * (zl + zr)
            stable = pressure_star_slope(zm, params) < 0.0
            self.segments.append((zl, zr, pressure_star(zl, params),
                                  pressure_star(zr, params), stable))

    def p(self, z):
        return pressure_star(z, self.params)

    def segment_of(self, z):
        """Segment containing z; at a shared boundary prefer the stable one."""
        hits = [s for s in self.segments if s[0] - _ZTOL <= z <= s[1] + _ZTOL]
        if not hits:
            raise NumericError(f"z_star={z} outside the wall band")
        for s in hits:
            if s[4]:
                return s
        return hits[0]

    def root_on(self, seg, p, xtol=1e-12):
        zl, zr, pl, pr, _ = seg
        return _bisect(lambda z: self.p(z) - p, zl, zr, xtol)

    def landing(self, p, z_from, direction):
        """Snap target at pressure p from z_from; direction +1 outward, -1 inward.

        Nearest stable root strictly on that side, else the wall there.
        """
        best = None
        for seg in self.segments:
            zl, zr, pl, pr, stable = seg
            if not stable:
                continue
            if not (min(pl, pr) <= p <= max(pl, pr)):
                continue
            z = self.root_on(seg, p)
            if direction > 0 and z > z_from + _EVENT_MIN:
                if best is None or z < best:
                    best = z
            elif direction < 0 and z < z_from - _EVENT_MIN:
                if best is None or z > best:
                    best = z
        if best is None:
            return self.z_out if direction > 0 else self.z_in
        return best


def _advance(scape: _Landscape, state: CycleState, p_next: float, events: list):
    """Quasi-static move to applied pressure p_next, appending (p, z_from, z_to)
    snap tuples to events.  Event pressures are clipped into the traversed
    pressure interval so externally constructed states degrade gracefully."""
    z, wall, p = state.z_star, state.wall, state.p_applied
    p_lo_step, p_hi_step = min(p, p_next), max(p, p_next)

    def clip(pe):
        return min(max(pe, p_lo_step), p_hi_step)

    for _ in range(32):
        if wall is Wall.OUTER:
            if p_next <= scape.p_out:
                return CycleState(scape.z_out, Wall.OUTER, p_next)
            p = clip(scape.p_out)  # contact force hits zero here
            z, wall, direction = scape.z_out, Wall.INTERIOR, -1
            seg = scape.segment_of(z)
            if seg[4]:
                continue  # wall sits on a stable branch: peel off continuously
            z_to = scape.landing(p, z, direction)
            if abs(z_to - z) > _EVENT_MIN:
                events.append((p, z, z_to))
            z = z_to
            wall = _wall_of(scape, z)
            continue
        if wall is Wall.INNER:
            if p_next >= scape.p_in:
                return CycleState(scape.z_in, Wall.INNER, p_next)
            p = clip(scape.p_in)
            z, wall, direction = scape.z_in, Wall.INTERIOR, +1
            seg = scape.segment_of(z)
            if seg[4]:
                continue
            z_to = scape.landing(p, z, direction)
            if abs(z_to - z) > _EVENT_MIN:
                events.append((p, z, z_to))
            z = z_to
            wall = _wall_of(scape, z)
            continue

        # interior
        seg = scape.segment_of(z)
        zl, zr, pl, pr, stable = seg
        if not stable:
            # off-branch state (externally constructed): snap along net force
            ps = scape.p(z)
            if abs(p - ps) <= _ZTOL:
                direction = -1 if p_next > p else +1
            else:
                direction = -1 if p > ps else +1
            z_to = scape.landing(clip(p), z, direction)
            if abs(z_to - z) > _EVENT_MIN:
                events.append((clip(p), z, z_to))
            z = z_to
            wall = _wall_of(scape, z)
            continue
        # stable segment: p* falls from pl at zl to pr at zr
        if pr <= p_next <= pl:
            z_new = scape.root_on(seg, p_next)
            w = _wall_of(scape, z_new)
            return CycleState(z_new if w is Wall.INTERIOR else
                              (scape.z_in if w is Wall.INNER else scape.z_out),
                              w, p_next)
        if p_next > pl:
            # branch ends at zl going up
            if zl <= scape.z_in + _ZTOL:
                return CycleState(scape.z_in, Wall.INNER, p_next)  # wall arrival
            p = clip(pl)  # fold
            z_to = scape.landing(p, zl, -1)
            if abs(z_to - zl) > _EVENT_MIN:
                events.append((p, zl, z_to))
            z = z_to
        else:
            if zr >= scape.z_out - _ZTOL:
                return CycleState(scape.z_out, Wall.OUTER, p_next)
            p = clip(pr)
            z_to = scape.landing(p, zr, +1)
            if abs(z_to - zr) > _EVENT_MIN:
                events.append((p, zr, z_to))
            z = z_to
        wall = _wall_of(scape, z)
    raise NumericError("quasi-static step did not settle in 32 transitions")


def _wall_of(scape, z):
    if z <= scape.z_in + _ZTOL:
        return Wall.INNER
    if z >= scape.z_out - _ZTOL:
        return Wall.OUTER
    return Wall.INTERIOR


def initial_state(params: MagnetoElasticParams) -> CycleState:
    """Rest state at zero applied pressure.

    Outer contact when the outer magnet can hold the membrane there
    (p*(z_out*) > 0); otherwise the most-open stable interior equilibrium;
    otherwise the inner wall (inner magnet dominates everywhere).
    """
    scape = _Landscape(params)
    if scape.p_out > 0.0:
        return CycleState(params.z_out_star, Wall.OUTER, 0.0)
    best = None
    for seg in scape.segments:
        zl, zr, pl, pr, stable = seg
        if not stable or not (min(pl, pr) <= 0.0 <= max(pl, pr)):
            continue
        z = scape.root_on(seg, 0.0, xtol=0.0)  # full precision for rest states
        if best is None or z > best:
            best = z
    if best is not None:
        w = _wall_of(scape, best)
        z = {Wall.INNER: params.z_in_star, Wall.OUTER: params.z_out_star,
             Wall.INTERIOR: best}[w]
        return CycleState(z, w, 0.0)
    if scape.p_in <= 0.0:
        return CycleState(params.z_in_star, Wall.INNER, 0.0)
    raise NumericError("no rest state found at zero pressure")


def step_quasi_static(state: CycleState, p_next: float,
                      params: MagnetoElasticParams,
                      events: list | None = None) -> CycleState:
    """Advance one quasi-static pressure step; optionally collect snap tuples.

    events, when given, receives one (p_applied, z_from, z_to) tuple per snap;
    the pressures are the exact thresholds at which each snap occurred.
    """
    scape = _Landscape(params)
    ev = events if events is not None else []
    return _advance(scape, state, p_next, ev)


def trace_cycle(params: MagnetoElasticParams, waveform: Waveform,
                n_cycles: int = 3, samples_per_cycle: int = 512) -> CycleTrace:
    """Sample the quasi-static response over n_cycles of the waveform.

    Starts from the zero-pressure rest state.  Snap events get timestamps by
    linear interpolation of the applied pressure inside the sampling step.
    """
    if n_cycles < 1:
        raise ValueError(f"n_cycles must be >= 1, got {n_cycles}")
    if samples_per_cycle < 8:
        raise ValueError(f"samples_per_cycle must be >= 8, got {samples_per_cycle}")
    scape = _Landscape(params)
    trace = CycleTrace(params=params, period=waveform.period,
                       samples_per_cycle=samples_per_cycle, n_cycles=n_cycles)
    state = initial_state(params)
    # move onto the waveform before the first sample
    ev0: list = []
    state = _advance(scape, state, waveform.pressure_at(0.0), ev0)
    for (pe, zf, zt) in ev0:
        trace.snap_events.append(SnapEvent(0.0, pe, zf, zt))
    trace.times.append(0.0)
    trace.states.append(state)
    dt = waveform.period / samples_per_cycle
    for k in range(1, n_cycles * samples_per_cycle + 1):
        t0, t1 = (k - 1) * dt, k * dt
        p0, p1 = state.p_applied, waveform.pressure_at(t1)
        ev: list = []
        state = _advance(scape, state, p1, ev)
        for (pe, zf, zt) in ev:
            if p1 != p0:
                te = t0 + (t1 - t0) * (pe - p0) / (p1 - p0)
                te = min(max(te, t0), t1)
            else:
                te = t1
            trace.snap_events.append(SnapEvent(te, pe, zf, zt))
        trace.times.append(t1)
        trace.states.append(state)
    return trace


def loop_polygon(trace: CycleTrace) -> list:
    """Closed (z*, p*) polygon of the last cycle, snap segments included.

    Samples and snap events are merged in time order; each snap contributes
    a constant-pressure segment between its endpoints.  Requires the trace to
    be periodic at its last cycle boundary (checked to 1e-9 when an earlier
    cycle is available for comparison).
    """
    spc = trace.samples_per_cycle
    n = len(trace.times) - 1
    if n < spc:
        raise ValueError("trace shorter than one full cycle")
    k0 = n - spc
    if k0 >= spc:  # a full earlier cycle exists to compare against
        za, zb = trace.states[k0 - spc].z_star, trace.states[k0].z_star
        if abs(za - zb) > 1e-9:
            raise NumericError(
                f"trace not periodic at cycle boundary: z changed by {zb - za:.3e}")
    t_lo = trace.times[k0]
    events = [e for e in trace.snap_events if e.t > t_lo]
    poly = [(trace.states[k0].z_star, trace.states[k0].p_applied)]
    ei = 0
    for k in range(k0 + 1, n + 1):
        t_prev, t_cur = trace.times[k - 1], trace.times[k]
        while ei < len(events) and t_prev < events[ei].t <= t_cur:
            e = events[ei]
            poly.append((e.z_star_from, e.p_applied))
            poly.append((e.z_star_to, e.p_applied))
            ei += 1
        st = trace.states[k]
        poly.append((st.z_star, st.p_applied))
    return poly


def loop_area(trace: CycleTrace) -> float:
    """Signed shoelace area of the last-cycle loop in the (z*, p*) plane.

    Positive orientation corresponds to net energy input per cycle.  The snap
    segments enter at their recorded threshold pressures, so the area of an
    ideal rectangular cycle is exact and independent of the sampling rate.
    """
    poly = loop_polygon(trace)
    area = 0.0
    m = len(poly)
    for i in range(m):
        x0, y0 = poly[i]
        x1, y1 = poly[(i + 1) % m]
        area += x0 * y1 - x1 * y0
    return 0.5 * area
