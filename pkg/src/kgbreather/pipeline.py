"""Experiment orchestration: runs configured by ExperimentConfig, CSV out.

All numeric output is CSV with floats rendered by repr(), which makes
files byte-identical across repeated runs of the same config and seed.
Wall-clock information is confined to run_metadata.txt so it never
perturbs the data files.
"""

from __future__ import annotations

import datetime
import itertools
import math
import os
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import analysis, kink
from .analytic import approximate_breather, sg_traveling_breather
from .config import (
    ExperimentConfig,
    build_grid,
    build_model,
    build_params,
    build_sim,
    dump_config,
    replace,
)
from .errors import ConfigError, NumericsError
from .solver import RunResult, init_from_solution, run

__all__ = [
    "resolve_out_dir",
    "initial_condition",
    "simulate",
    "compare",
    "kink_to_csv",
    "sweep",
]


def resolve_out_dir(cfg_dir: str, cli_out: str | None = None) -> str:
    """Output directory: --out flag beats config; KGBREATHER_OUT roots relative paths."""
    base = cli_out if cli_out else cfg_dir
    root = os.environ.get("KGBREATHER_OUT", "")
    if root and not os.path.isabs(base):
        return os.path.join(root, base)
    return base


def initial_condition(cfg: ExperimentConfig):
    """The (x, t) -> u callable a run starts from and is compared against."""
    params = build_params(cfg)
    if cfg.initial == "exact":
        return lambda x, t: sg_traveling_breather(x, t, params)
    model = build_model(cfg)
    return lambda x, t: approximate_breather(x, t, params, model)


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (float, np.floating)):
        v = float(value)
        return "" if math.isnan(v) else repr(v)
    return str(value)


def _write_csv(path: str, header: list[str], rows) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_cell(c) for c in row) + "\n")


def _write_metadata(out_dir: str, cfg: ExperimentConfig) -> None:
    stamp = datetime.datetime.now(datetime.timezone.utc).isoformat()
    with open(os.path.join(out_dir, "run_metadata.txt"), "w", encoding="utf-8") as fh:
        fh.write(f"written_utc = {stamp}\n\n")
        fh.write(dump_config(cfg))


def _write_snapshots(out_dir: str, cfg: ExperimentConfig, result: RunResult, ref) -> None:
    x = result.config.grid.x
    if cfg.wide_csv:
        header = ["t"] + [repr(float(xi)) for xi in x]
        rows = (
            [t] + list(u)
            for t, u in zip(result.snapshot_times, result.snapshots)
        )
        _write_csv(os.path.join(out_dir, "snapshots_wide.csv"), header, rows)
        return
    snap_dir = os.path.join(out_dir, "snapshots")
    os.makedirs(snap_dir, exist_ok=True)
    index_rows = []
    for i, (t, u) in enumerate(zip(result.snapshot_times, result.snapshots)):
        name = f"snapshot_{i:04d}.csv"
        index_rows.append((i, float(t), name))
        _write_csv(
            os.path.join(snap_dir, name),
            ["x", "u", "u_ref"],
            zip(x, u, ref(x, float(t))),
        )
    _write_csv(os.path.join(out_dir, "snapshots_index.csv"), ["index", "t", "file"], index_rows)


def simulate(cfg: ExperimentConfig, out_dir: str) -> RunResult:
    """Integrate the configured experiment and write snapshot/energy files."""
    os.makedirs(out_dir, exist_ok=True)
    sim = build_sim(cfg)
    ref = initial_condition(cfg)
    state = init_from_solution(ref, sim.grid, sim.dt)
    result = run(sim, state)

    _write_snapshots(out_dir, cfg, result, ref)
    _write_csv(
        os.path.join(out_dir, "energy.csv"),
        ["t", "E"],
        ((rec.t, rec.E) for rec in result.energies),
    )
    if result.probes is not None:
        header = ["t"] + [f"x={float(px):g}" for px in result.probes.x]
        rows = ([t] + list(uu) for t, uu in zip(result.probes.t, result.probes.u))
        _write_csv(os.path.join(out_dir, "probes.csv"), header, rows)
    _write_metadata(out_dir, cfg)
    return result


def _analysis_epsilon(cfg: ExperimentConfig, result: RunResult) -> float:
    if cfg.epsilon is not None:
        return cfg.epsilon
    return 0.01 * float(np.max(np.abs(result.snapshots[0])))


def compare(cfg: ExperimentConfig, out_dir: str):
    """simulate + correlation pipeline; returns (RunResult, records)."""
    result = simulate(cfg, out_dir)
    params = build_params(cfg)
    model = build_model(cfg)
    ref = initial_condition(cfg)
    records = analysis.correlation_timeseries(
        result,
        params,
        model,
        L=cfg.L,
        N=cfg.N,
        seed=cfg.seed,
        epsilon=cfg.epsilon,
        cadence=cfg.cadence,
        analytic=ref,
    )
    _write_csv(
        os.path.join(out_dir, "correlation.csv"),
        ["t", "x_max", "K_corr", "N", "seed"],
        ((r.t, r.x_max, r.K_corr, r.N, r.seed) for r in records),
    )

    eps = _analysis_epsilon(cfg, result)
    grid = result.config.grid
    extrema_rows = []
    envelope_rows = []
    for t, u in zip(result.snapshot_times[:: cfg.cadence], result.snapshots[:: cfg.cadence]):
        try:
            ext = analysis.find_extrema(u, grid, eps, float(t))
        except NumericsError:
            continue
        extrema_rows.extend((ext.t, xx, aa) for xx, aa in zip(ext.x, ext.amp))
        if ext.x.size >= 4:
            env = analysis.envelope(ext)
            xs = np.linspace(ext.x[0], ext.x[-1], 256)
            envelope_rows.extend((ext.t, xx, ee) for xx, ee in zip(xs, env(xs)))
    _write_csv(os.path.join(out_dir, "extrema.csv"), ["t", "x", "amp"], extrema_rows)
    _write_csv(os.path.join(out_dir, "envelope.csv"), ["t", "x", "env"], envelope_rows)

    if cfg.svg:
        from . import plots

        plots.correlation_svg(records, os.path.join(out_dir, "fig_correlation.svg"))
        plots.final_snapshot_svg(result, ref, os.path.join(out_dir, "fig_snapshot.svg"))
        if result.probes is not None:
            plots.probe_svg(result.probes, os.path.join(out_dir, "fig_probe.svg"))
    return result, records


def kink_to_csv(b: float, xi_max: float, out_dir: str, n_points: int = 2001, tol: float = 1e-10):
    """Compute a kink profile and write it as (xi, u) CSV."""
    os.makedirs(out_dir, exist_ok=True)
    profile = kink.kink_profile(b, xi_max=xi_max, n_points=n_points, tol=tol)
    _write_csv(os.path.join(out_dir, "kink.csv"), ["xi", "u"], zip(profile.xi, profile.u))
    return profile


def final_correlation(records) -> float | None:
    """K_corr of the last non-gap record, if any."""
    for r in reversed(records):
        if not r.is_gap:
            return r.K_corr
    return None


def _point_label(omega: float, b: float, v: float) -> str:
    return f"omega{omega:g}_b{b:g}_v{v:g}"


def _sweep_point(args):
    cfg, out_dir, omega, b, v = args
    label = _point_label(omega, b, v)
    try:
        sub = replace(cfg, omega=omega, b=b, v=v, svg=False)
        _result, records = compare(sub, os.path.join(out_dir, label))
        k = final_correlation(records)
        return (omega, b, v, k, "ok" if k is not None else "gap")
    except (ConfigError, NumericsError) as exc:
        return (omega, b, v, None, type(exc).__name__)


def sweep(cfg: ExperimentConfig, out_dir: str):
    """Cartesian sweep over [sweep] lists; per-point dirs plus summary.csv."""
    os.makedirs(out_dir, exist_ok=True)
    omegas = cfg.sweep_omega or (cfg.omega,)
    bs = cfg.sweep_b or (cfg.b,)
    vs = cfg.sweep_v or (cfg.v,)
    points = list(itertools.product(omegas, bs, vs))
    if len(points) > cfg.sweep_max_points:
        raise ConfigError(
            f"sweep: {len(points)} points exceed sweep.max_points = {cfg.sweep_max_points}"
        )
    tasks = [(cfg, out_dir, om, b, v) for om, b, v in points]
    if cfg.sweep_workers > 1:
        with ProcessPoolExecutor(max_workers=cfg.sweep_workers) as pool:
            rows = list(pool.map(_sweep_point, tasks))
    else:
        rows = [_sweep_point(t) for t in tasks]
    _write_csv(
        os.path.join(out_dir, "summary.csv"),
        ["omega", "b", "v", "K_corr_final", "status"],
        rows,
    )
    _write_metadata(out_dir, cfg)
    return rows
