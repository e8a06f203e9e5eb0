"""Periodic pneumatic actuation waveforms (piecewise-linear in time)."""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass

__all__ = ["Waveform", "make_square", "make_trapezoid", "waveform_preset",
           "WAVEFORM_PRESETS"]


@dataclass(frozen=True)
class Waveform:
    """Periodic pressure signal defined by linear interpolation between knots.

    knots is a tuple of (time_s, pressure) pairs with strictly increasing
    times inside [0, period]; when the last knot sits before the period end,
    the signal is interpolated across the wrap to the first knot of the next
    period.
    """

    knots: tuple
    period: float

    def __post_init__(self):
        if self.period <= 0.0:
            raise ValueError(f"period must be positive, got {self.period}")
        if len(self.knots) < 1:
            raise ValueError("waveform needs at least one knot")
        ts = [t for t, _ in self.knots]
        if any(t1 <= t0 for t0, t1 in zip(ts, ts[1:])):
            raise ValueError("knot times must be strictly increasing")
        if ts[0] < 0.0 or ts[-1] > self.period:
            raise ValueError("knot times must lie inside [0, period]")
        object.__setattr__(self, "knots", tuple((float(t), float(p))
                                                for t, p in self.knots))

    def pressure_at(self, t: float) -> float:
        """Pressure at time t; periodic extension in both directions."""
        tau = t % self.period  # non-negative for period > 0
        ts = [k[0] for k in self.knots]
        i = bisect_right(ts, tau) - 1
        if i < 0:
            # before the first knot: wrap from the last knot of the previous period
            t0, p0 = self.knots[-1]
            t0 -= self.period
            t1, p1 = self.knots[0]
        elif i == len(self.knots) - 1:
            t0, p0 = self.knots[-1]
            t1, p1 = self.knots[0]
            t1 += self.period
        else:
            t0, p0 = self.knots[i]
            t1, p1 = self.knots[i + 1]
        if t1 == t0:
            return p0
        return p0 + (p1 - p0) * (tau - t0) / (t1 - t0)

    def mean(self, n: int = 4096) -> float:
        """Trapezoid-rule mean over one period (diagnostic)."""
        dt = self.period / n
        acc = 0.0
        prev = self.pressure_at(0.0)
        for k in range(1, n + 1):
            cur = self.pressure_at(k * dt)
            acc += 0.5 * (prev + cur) * dt
            prev = cur
        return acc / self.period


def make_square(period: float = 1.0, p_high: float = 7.0, p_low: float = -1.0,
                ramp_fraction: float = 0.0) -> Waveform:
    """Square wave: equal high/low plateaus joined by linear ramps.

    Each ramp occupies ramp_fraction of the period (so each half-period is
    one ramp plus one plateau; ramp_fraction=0.1 at period 1 s gives 0.4 s
    plateaus).  ramp_fraction=0 requests an ideal square; knot times must be
    strictly increasing, so the jump is realised as a 1e-9*period transition,
    invisible at any practical sampling.
    """
    if period <= 0.0:
        raise ValueError(f"period must be positive, got {period}")
    if not (0.0 <= ramp_fraction < 0.5):
        raise ValueError(f"ramp_fraction must be in [0, 0.5), got {ramp_fraction}")
    w = max(ramp_fraction, 1e-9) * period
    half = 0.5 * period
    knots = ((0.0, p_low), (w, p_high), (half, p_high), (half + w, p_low))
    return Waveform(knots=knots, period=period)


# Canonical pressurise/hold/suction/hold schedule, time in seconds at scale 1:
# rest to 0.2, ramp to +p_max by 0.3, hold to 0.5, fall to -p_min by 0.7,
# hold to 1.1, return to zero by 1.2 (period).
_TRAPEZOID_TIMES = (0.0, 0.2, 0.3, 0.5, 0.7, 1.1)
_TRAPEZOID_PERIOD = 1.2


def make_trapezoid(p_max: float = 7.0, p_min: float = 1.0,
                   time_scale: float = 1.0) -> Waveform:
    """Trapezoidal pump cycle: rest, pressurise to +p_max, suction to -p_min.

    p_min is a magnitude; the suction hold sits at -p_min.  time_scale
    stretches the whole schedule (default period 1.2 s).
    """
    if time_scale <= 0.0:
        raise ValueError(f"time_scale must be positive, got {time_scale}")
    levels = (0.0, 0.0, p_max, p_max, -p_min, -p_min)
    knots = tuple((t * time_scale, p) for t, p in zip(_TRAPEZOID_TIMES, levels))
    return Waveform(knots=knots, period=_TRAPEZOID_PERIOD * time_scale)


def waveform_preset(name: str, p_max: float = 7.0, p_min: float = 1.0) -> Waveform:
    """Build a named preset; p_min is the suction magnitude."""
    if name == "trapezoid":
        return make_trapezoid(p_max=p_max, p_min=p_min)
    if name == "square-500ms":
        # plateau switching every 500 ms
        return make_square(period=1.0, p_high=p_max, p_low=-p_min)
    raise ValueError(f"unknown waveform preset {name!r}; "
                     f"known: {sorted(WAVEFORM_PRESETS)}")


WAVEFORM_PRESETS = ("trapezoid", "square-500ms")
