"""Configuration loading, validation, and the command-line entry point."""

import os

import numpy as np
import pytest

from kgbreather import pipeline
from kgbreather.cli import main as cli_main
from kgbreather.config import (
    ConfigError,
    default_config_text,
    dump_config,
    load_config,
    packaged_config_path,
    replace,
)

TINY = (
    "grid.x_min=-20",
    "grid.x_max=40",
    "time.t_end=5",
    "time.snapshot_every=100",
    "analysis.L=5",
    "analysis.N=50",
)


def _tiny_args(out, extra=()):
    args = []
    for kv in TINY + tuple(extra):
        args += ["--set", kv]
    return args + ["--out", str(out)]


def test_defaults_are_the_reference_experiment():
    cfg = load_config()
    assert cfg.model_kind == "gsl" and cfg.b == 0.9
    assert cfg.omega == 0.97 and cfg.v == 0.9 and cfg.initial == "approximate"
    assert (cfg.x_min, cfg.x_max, cfg.dx) == (-50.0, 300.0, 0.05)
    assert (cfg.dt, cfg.t_end, cfg.snapshot_every) == (0.025, 250.0, 1000)
    assert cfg.boundary == "dirichlet0" and cfg.probe_x == ()
    assert (cfg.L, cfg.N, cfg.seed, cfg.cadence) == (10.0, 200, 10, 1)
    assert cfg.epsilon is None


def test_dump_load_round_trip(tmp_path):
    cfg = load_config(None, ("breather.omega=0.95", "solver.probe_x=50.0, 60.5", "output.svg=true"))
    text = dump_config(cfg)
    path = tmp_path / "rt.cfg"
    path.write_text(text)
    again = load_config(str(path))
    assert again == cfg
    assert again.probe_x == (50.0, 60.5)
    assert default_config_text() == dump_config(load_config())


def test_replace_revalidates():
    cfg = load_config()
    ok = replace(cfg, omega=0.95)
    assert ok.omega == 0.95
    with pytest.raises(ConfigError):
        replace(cfg, omega=1.5)
    with pytest.raises(ConfigError):
        replace(cfg, v=1.0)


def test_override_and_key_validation():
    assert load_config(None, ("breather.omega=0.9",)).omega == 0.9
    with pytest.raises(ConfigError):
        load_config(None, ("nosuch.key=1",))
    with pytest.raises(ConfigError):
        load_config(None, ("breather.nosuch=1",))
    with pytest.raises(ConfigError):
        load_config(None, ("breather.omega",))  # missing '='
    with pytest.raises(ConfigError):
        load_config(None, ("breather.omega=abc",))
    with pytest.raises(ConfigError):
        load_config(None, ("grid.dx=-0.05",))
    with pytest.raises(ConfigError):
        load_config(None, ("time.dt=0.2",))  # violates the stability margin
    with pytest.raises(ConfigError):
        load_config(None, ("analysis.N=1",))
    with pytest.raises(ConfigError):
        load_config(None, ("model.kind=banana",))
    with pytest.raises(ConfigError):
        load_config("/nonexistent/path.cfg")


def test_cross_field_rules():
    with pytest.raises(ConfigError):
        load_config(None, ("breather.initial=exact",))  # defaults use gsl
    cfg = load_config(None, ("model.kind=sine_gordon", "breather.initial=exact"))
    assert cfg.initial == "exact"
    with pytest.raises(ConfigError):
        load_config(None, ("model.kind=sine_gordon", "sweep.b=0.5,0.9"))


def test_packaged_configs_load():
    for name in ("gsl_fig1", "gsl_fig2", "gsl_fig5", "sg_control", "kink_b09"):
        cfg = load_config(packaged_config_path(name))
        assert cfg.out_dir
    assert load_config(packaged_config_path("gsl_fig2")).probe_x == (50.0,)
    assert load_config(packaged_config_path("sg_control")).initial == "exact"
    with pytest.raises(ConfigError):
        packaged_config_path("nosuch")


def test_sweep_point_cap(tmp_path):
    cfg = load_config(None, ("sweep.max_points=4",))
    cfg = replace(cfg, sweep_omega=tuple(0.9 + 0.001 * k for k in range(5)))
    with pytest.raises(ConfigError):
        pipeline.sweep(cfg, str(tmp_path / "sw"))


def test_cli_print_defaults(tmp_path, capsys):
    assert cli_main(["print-defaults"]) == 0
    text = capsys.readouterr().out
    assert text == default_config_text()
    path = tmp_path / "defaults.cfg"
    path.write_text(text)
    assert load_config(str(path)) == load_config()


def test_cli_simulate_writes_artifacts(tmp_path, capsys):
    out = tmp_path / "sim"
    assert cli_main(["simulate"] + _tiny_args(out)) == 0
    assert capsys.readouterr().out.startswith("simulate: ")
    assert (out / "energy.csv").is_file()
    assert (out / "run_metadata.txt").is_file()
    assert (out / "snapshots_index.csv").is_file()
    assert (out / "snapshots" / "snapshot_0000.csv").is_file()
    snap = np.genfromtxt(out / "snapshots" / "snapshot_0000.csv", delimiter=",", names=True)
    assert set(snap.dtype.names) == {"x", "u", "u_ref"}
    e = np.genfromtxt(out / "energy.csv", delimiter=",", names=True)
    assert e["E"].size >= 2 and np.all(np.isfinite(e["E"]))


def test_cli_simulate_wide_csv(tmp_path):
    out = tmp_path / "simw"
    assert cli_main(["simulate"] + _tiny_args(out, ("output.wide_csv=true",))) == 0
    assert (out / "snapshots_wide.csv").is_file()
    assert not (out / "snapshots").exists()


def test_cli_simulate_probe_series(tmp_path):
    out = tmp_path / "simp"
    assert cli_main(["simulate"] + _tiny_args(out, ("solver.probe_x=10.0",))) == 0
    p = np.genfromtxt(out / "probes.csv", delimiter=",", names=True)
    assert p.size == int(round((5.0 - 0.025) / 0.025)) + 1


def test_cli_compare_outputs_and_summary_line(tmp_path, capsys):
    out = tmp_path / "cmp"
    assert cli_main(["compare"] + _tiny_args(out)) == 0
    line = capsys.readouterr().out
    assert line.startswith("compare: K_corr(t=5) = 0.9")
    for name in ("correlation.csv", "extrema.csv", "envelope.csv", "energy.csv"):
        assert (out / name).is_file()


def test_cli_compare_svg(tmp_path):
    out = tmp_path / "cmps"
    assert cli_main(["compare"] + _tiny_args(out, ("output.svg=true",))) == 0
    assert (out / "fig_correlation.svg").is_file()
    assert (out / "fig_snapshot.svg").is_file()


def test_cli_kink(tmp_path, capsys):
    out = tmp_path / "kk"
    assert cli_main(["kink", "--out", str(out), "--n-points", "101"]) == 0
    assert capsys.readouterr().out.startswith("kink: b=0.9, 101 samples")
    data = np.genfromtxt(out / "kink.csv", delimiter=",", names=True)
    assert data.size == 101
    mid = data["u"][50]
    assert mid == pytest.approx(np.pi, abs=1e-12)


def test_cli_exit_codes(tmp_path, capsys):
    # config errors -> 1
    assert cli_main(["compare", "--set", "breather.omega=1.5", "--out", str(tmp_path / "a")]) == 1
    assert "config error" in capsys.readouterr().err
    assert cli_main(["kink", "--b", "-1", "--out", str(tmp_path / "b")]) == 1
    assert cli_main(["kink", "--n-points", "1", "--out", str(tmp_path / "c")]) == 1
    assert cli_main(["nosuchcommand"]) == 1
    assert cli_main(["simulate", "--nosuchflag"]) == 1
    assert cli_main([]) == 1
    capsys.readouterr()
    # numeric failures during analysis -> 2
    code = cli_main(
        ["compare"]
        + _tiny_args(tmp_path / "d", ("analysis.epsilon=0.64",))
    )
    assert code == 2
    assert "numeric failure" in capsys.readouterr().err


def test_cli_output_root_env(tmp_path, monkeypatch):
    monkeypatch.setenv("KGBREATHER_OUT", str(tmp_path))
    assert cli_main(["simulate"] + [a for a in _tiny_args("relout") if True]) == 0
    assert (tmp_path / "relout" / "energy.csv").is_file()
    # absolute --out ignores the root
    absdir = tmp_path / "absolute"
    assert cli_main(["simulate"] + _tiny_args(absdir)) == 0
    assert (absdir / "energy.csv").is_file()


def test_cli_sweep_and_parallel_workers(tmp_path, capsys):
    args = lambda out, extra=(): (
        ["sweep"]
        + _tiny_args(out, ("sweep.omega=0.96,0.98", "time.t_end=2") + extra)
    )
    out1 = tmp_path / "sw1"
    assert cli_main(args(out1)) == 0
    assert capsys.readouterr().out.startswith("sweep: 2/2 points ok")
    rows = (out1 / "summary.csv").read_text().strip().splitlines()
    assert rows[0] == "omega,b,v,K_corr_final,status"
    assert len(rows) == 3
    assert (out1 / "omega0.96_b0.9_v0.9" / "correlation.csv").is_file()

    out2 = tmp_path / "sw2"
    assert cli_main(args(out2, ("sweep.workers=2",))) == 0
    assert (out2 / "summary.csv").read_bytes() == (out1 / "summary.csv").read_bytes()


def test_sweep_correlation_drops_away_from_the_weak_limit(tmp_path):
    # at fixed t the pulse with larger internal amplitude (smaller omega)
    # decorrelates from its one-harmonic seed faster
    out = tmp_path / "trend"
    code = cli_main(
        ["sweep", "--out", str(out)]
        + sum((["--set", kv] for kv in (
            "grid.x_min=-50", "grid.x_max=100", "time.t_end=50",
            "time.snapshot_every=2000", "sweep.omega=0.95,0.99",
        )), [])
    )
    assert code == 0
    rows = (out / "summary.csv").read_text().strip().splitlines()[1:]
    ks = {float(r.split(",")[0]): float(r.split(",")[3]) for r in rows}
    assert ks[0.99] > ks[0.95]
    assert ks[0.95] > 0.9
