"""Command line interface: exit codes, output files, determinism."""

import pathlib
import subprocess
import sys

import pytest

import magpump.cli as cli
from magpump.errors import StepError

CONFIGS = pathlib.Path(__file__).resolve().parents[1] / "configs"

FAST_PUMP = """\
chain: asym-2cell
waveform: square-500ms
numerics:
  dt: 5.0e-4
  n_cycles: 1
"""

FAST_CYCLE = """\
waveform:
  square: {period: 1.0, p_high: 7.0, p_low: -1.0}
numerics:
  n_cycles: 2
  samples_per_cycle: 128
"""

FAST_SWEEP = """\
waveform:
  square: {period: 1.0, p_high: 7.0, p_low: -1.0}
sweep:
  metric: loop_area
  axes:
    a: [0.0, 0.1]
"""


def run_cli(*argv):
    return subprocess.run([sys.executable, "-m", "magpump.cli", *argv],
                          capture_output=True, text=True)


def test_analyze_writes_expected_files(tmp_path):
    out = tmp_path / "out"
    res = run_cli("analyze", "--config", str(CONFIGS / "analyze_default.yaml"),
                  "--out", str(out))
    assert res.returncode == 0, res.stderr
    for name in ("analyze_curves.csv", "analyze_stationary.csv",
                 "analyze_acrit.csv"):
        assert (out / name).is_file()
    acrit = (out / "analyze_acrit.csv").read_text().splitlines()
    assert acrit[0] == "z1_star,a_crit"
    assert acrit[1].startswith("1.5,0.13397544864084")


def test_cycle_writes_expected_files(tmp_path):
    cfg = tmp_path / "cycle.yaml"
    cfg.write_text(FAST_CYCLE)
    out = tmp_path / "out"
    res = run_cli("cycle", "--config", str(cfg), "--out", str(out), "--svg")
    assert res.returncode == 0, res.stderr
    for name in ("cycle_trace.csv", "cycle_events.csv", "cycle_summary.csv",
                 "cycle_loop.svg"):
        assert (out / name).is_file()
    summary = (out / "cycle_summary.csv").read_text().splitlines()
    assert summary[0].startswith("loop_area,snap_events_last_cycle")
    area = float(summary[1].split(",")[0])
    assert area == pytest.approx(6.1424, abs=1e-9)
    assert summary[1].split(",")[1] == "2"


def test_pump_writes_expected_files(tmp_path):
    cfg = tmp_path / "pump.yaml"
    cfg.write_text(FAST_PUMP)
    out = tmp_path / "out"
    res = run_cli("pump", "--config", str(cfg), "--out", str(out))
    assert res.returncode == 0, res.stderr
    for name in ("pump_timeseries.csv", "pump_events.csv",
                 "pump_summary.csv"):
        assert (out / name).is_file()
    header = (out / "pump_timeseries.csv").read_text().splitlines()[0]
    assert header.split(",")[:6] == ["t", "p_pneu", "inflow", "outflow",
                                     "accumulated_flow", "volume_conveyed"]
    assert "z_star_1" in header and "wall_1" in header
    summary = dict(zip(*[line.split(",") for line in
                         (out / "pump_summary.csv").read_text().splitlines()]))
    assert float(summary["net_volume_per_cycle"]) > 0.0


def test_sweep_writes_table_and_plot(tmp_path):
    cfg = tmp_path / "sweep.yaml"
    cfg.write_text(FAST_SWEEP)
    out = tmp_path / "out"
    res = run_cli("sweep", "--config", str(cfg), "--out", str(out), "--svg")
    assert res.returncode == 0, res.stderr
    lines = (out / "sweep.csv").read_text().splitlines()
    assert lines[0] == "a,loop_area"
    assert float(lines[1].split(",")[1]) == pytest.approx(0.0, abs=1e-9)
    assert float(lines[2].split(",")[1]) == pytest.approx(6.1424, abs=1e-6)
    assert (out / "sweep.svg").is_file()


def test_sweep_output_is_deterministic(tmp_path):
    cfg = tmp_path / "sweep.yaml"
    cfg.write_text(FAST_SWEEP)
    out1, out2 = tmp_path / "o1", tmp_path / "o2"
    assert run_cli("sweep", "--config", str(cfg), "--out",
                   str(out1)).returncode == 0
    assert run_cli("sweep", "--config", str(cfg), "--out",
                   str(out2)).returncode == 0
    assert (out1 / "sweep.csv").read_bytes() == \
        (out2 / "sweep.csv").read_bytes()


def test_missing_config_exits_2(tmp_path):
    res = run_cli("analyze", "--config", str(tmp_path / "nope.yaml"))
    assert res.returncode == 2
    assert "config error" in res.stderr


def test_invalid_config_exits_2(tmp_path):
    cfg = tmp_path / "bad.yaml"
    cfg.write_text("model:\n  a: -0.5\n")
    res = run_cli("analyze", "--config", str(cfg))
    assert res.returncode == 2
    assert "config error" in res.stderr


def test_sweep_without_block_exits_2(tmp_path):
    cfg = tmp_path / "nosweep.yaml"
    cfg.write_text("chain: asym-2cell\n")
    res = run_cli("sweep", "--config", str(cfg), "--out",
                  str(tmp_path / "o"))
    assert res.returncode == 2
    assert "sweep" in res.stderr


def test_numeric_failure_exits_3(tmp_path, monkeypatch, capsys):
    cfg = tmp_path / "pump.yaml"
    cfg.write_text(FAST_PUMP)

    def explode(*args, **kwargs):
        raise StepError("coupling did not converge", t=0.125, residual=1.0)

    monkeypatch.setattr(cli, "pump_run", explode)
    rc = cli.main(["pump", "--config", str(cfg), "--out",
                   str(tmp_path / "o")])
    assert rc == 3
    err = capsys.readouterr().err
    assert "t=0.125" in err


def test_in_process_main_matches_subprocess(tmp_path):
    cfg = tmp_path / "cycle.yaml"
    cfg.write_text(FAST_CYCLE)
    rc = cli.main(["cycle", "--config", str(cfg), "--out",
                   str(tmp_path / "o")])
    assert rc == 0
    assert (tmp_path / "o" / "cycle_summary.csv").is_file()
