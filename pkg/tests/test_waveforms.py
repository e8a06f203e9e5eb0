"""Piecewise-linear periodic drive signals."""

import numpy as np
import pytest

from magpump.waveforms import (Waveform, make_square, make_trapezoid,
                               waveform_preset)


def test_flat_waveform_is_zero_everywhere():
    wf = Waveform(knots=((0.0, 0.0), (1.0, 0.0)), period=1.0)
    for t in (-3.7, 0.0, 0.25, 0.999, 1.0, 42.0):
        assert wf.pressure_at(t) == 0.0


def test_periodicity():
    rng = np.random.default_rng(19)
    for _ in range(20):
        n = int(rng.integers(2, 8))
        period = float(rng.uniform(0.5, 3.0))
        ts = np.sort(rng.uniform(0.0, period, size=n))
        ts[0] = 0.0
        knots = tuple((float(t), float(p))
                      for t, p in zip(ts, rng.uniform(-5.0, 5.0, size=n)))
        wf = Waveform(knots=knots, period=period)
        for t in rng.uniform(-10.0, 10.0, size=50):
            t = float(t)
            assert wf.pressure_at(t) == pytest.approx(
                wf.pressure_at(t + period), abs=1e-9)
            assert wf.pressure_at(t) == pytest.approx(
                wf.pressure_at(t - 3 * period), abs=1e-9)


def test_values_stay_within_knot_range():
    rng = np.random.default_rng(23)
    knots = ((0.0, -2.0), (0.3, 5.0), (0.8, 1.0))
    wf = Waveform(knots=knots, period=1.0)
    lo, hi = -2.0, 5.0
    for t in rng.uniform(-5.0, 5.0, size=500):
        p = wf.pressure_at(float(t))
        assert lo - 1e-12 <= p <= hi + 1e-12


def test_interpolation_and_wraparound():
    # single knot at t=0: the wrap leg interpolates 0.2 -> 1.2 back to it
    wf = Waveform(knots=((0.0, 0.0), (0.2, 4.0)), period=1.2)
    assert wf.pressure_at(0.1) == pytest.approx(2.0, abs=1e-12)
    assert wf.pressure_at(0.7) == pytest.approx(2.0, abs=1e-12)  # halfway back
    assert wf.pressure_at(1.2) == 0.0


def test_square_reference_phases():
    wf = waveform_preset("square-500ms", p_max=7.0, p_min=1.0)
    assert wf.period == 1.0
    assert wf.pressure_at(0.25) == pytest.approx(7.0, abs=1e-6)
    assert wf.pressure_at(0.75) == pytest.approx(-1.0, abs=1e-6)


def test_square_with_finite_ramp():
    wf = make_square(period=1.0, p_high=2.0, p_low=-2.0, ramp_fraction=0.1)
    assert wf.pressure_at(0.05) == pytest.approx(0.0, abs=1e-12)  # mid-ramp
    assert wf.pressure_at(0.1) == 2.0
    assert wf.pressure_at(0.3) == 2.0
    assert wf.pressure_at(0.5) == 2.0
    assert wf.pressure_at(0.55) == pytest.approx(0.0, abs=1e-12)
    assert wf.pressure_at(0.8) == -2.0
    assert wf.mean() == pytest.approx(0.0, abs=1e-9)


def test_trapezoid_reference_phases():
    wf = make_trapezoid(p_max=7.0, p_min=1.0)
    assert wf.period == pytest.approx(1.2, rel=1e-12)
    assert wf.pressure_at(0.1) == 0.0          # rest plateau
    assert wf.pressure_at(0.25) == pytest.approx(3.5, abs=1e-12)  # mid-rise
    assert wf.pressure_at(0.4) == 7.0          # high plateau
    assert wf.pressure_at(0.9) == -1.0         # suction plateau
    assert wf.pressure_at(1.15) == pytest.approx(-0.5, abs=1e-12)  # return leg


def test_trapezoid_time_scale():
    slow = make_trapezoid(p_max=7.0, p_min=1.0, time_scale=2.0)
    fast = make_trapezoid(p_max=7.0, p_min=1.0)
    assert slow.period == pytest.approx(2.4, rel=1e-12)
    rng = np.random.default_rng(5)
    for t in rng.uniform(0.0, 1.2, size=100):
        assert slow.pressure_at(2.0 * float(t)) == pytest.approx(
            fast.pressure_at(float(t)), abs=1e-12)


def test_preset_names():
    assert waveform_preset("trapezoid", p_max=7.0, p_min=1.0).period == \
        pytest.approx(1.2)
    with pytest.raises(ValueError):
        waveform_preset("no-such-wave", p_max=7.0, p_min=1.0)


def test_knot_allowed_at_exactly_period():
    wf = Waveform(knots=((0.0, 1.0), (2.0, 3.0)), period=2.0)
    assert wf.pressure_at(1.0) == pytest.approx(2.0, abs=1e-12)
    assert wf.pressure_at(0.0) == 1.0


def test_validation():
    with pytest.raises(ValueError):
        Waveform(knots=((0.0, 0.0), (1.0, 0.0)), period=0.0)
    with pytest.raises(ValueError):
        Waveform(knots=(), period=1.0)
    with pytest.raises(ValueError):
        Waveform(knots=((0.5, 0.0), (0.2, 1.0)), period=1.0)  # not sorted
    with pytest.raises(ValueError):
        Waveform(knots=((0.0, 0.0), (1.5, 1.0)), period=1.0)  # beyond period
    with pytest.raises(ValueError):
        make_square(period=-1.0, p_high=1.0, p_low=-1.0)
    with pytest.raises(ValueError):
        make_square(period=1.0, p_high=1.0, p_low=-1.0, ramp_fraction=0.5)
    with pytest.raises(ValueError):
        make_square(period=1.0, p_high=1.0, p_low=-1.0, ramp_fraction=-0.1)


def test_mean_of_balanced_square_is_zero():
    wf = make_square(period=2.0, p_high=3.0, p_low=-3.0, ramp_fraction=0.2)
    assert wf.mean() == pytest.approx(0.0, abs=1e-9)
