"""Shared fixtures: the pinned breather experiment and other session-wide runs."""

import time

import numpy as np
import pytest

import kgbreather as kg
from kgbreather import analysis
from kgbreather.config import (
    build_model,
    build_params,
    build_sim,
    load_config,
    packaged_config_path,
)
from kgbreather.pipeline import initial_condition


@pytest.fixture(scope="session")
def gsl():
    return kg.GrapheneSL(b=0.9)


@pytest.fixture(scope="session")
def params97():
    return kg.BreatherParams(omega=0.97, v=0.9)


@pytest.fixture(scope="session")
def main_run():
    """Default experiment straight from the shipped configuration.

    Integrates the approximate superlattice breather (b = 0.9,
    omega = 0.97, v = 0.9) to t = 250 and runs the full correlation
    pipeline with the configured seed.  Wall time covers both stages.
    """
    cfg = load_config()
    sim = build_sim(cfg)
    t0 = time.perf_counter()
    state = kg.init_from_solution(initial_condition(cfg), sim.grid, sim.dt)
    result = kg.run(sim, state)
    records = analysis.correlation_timeseries(
        result,
        build_params(cfg),
        build_model(cfg),
        L=cfg.L,
        N=cfg.N,
        seed=cfg.seed,
        epsilon=cfg.epsilon,
        cadence=cfg.cadence,
    )
    elapsed = time.perf_counter() - t0
    return {"cfg": cfg, "result": result, "records": records, "elapsed": elapsed}


@pytest.fixture(scope="session")
def probe_run():
    """Shorter run with a field probe at x = 50 (shipped probe config)."""
    cfg = load_config(packaged_config_path("gsl_fig2"))
    sim = build_sim(cfg)
    state = kg.init_from_solution(initial_condition(cfg), sim.grid, sim.dt)
    return {"cfg": cfg, "result": kg.run(sim, state)}


@pytest.fixture(scope="session")
def sg_control_errors():
    """Sup-norm error at t = 50 of the exact sine-Gordon breather run,
    at three resolutions halving dx and dt together."""
    params = kg.BreatherParams(omega=0.9, v=0.5)

    def sol(x, t):
        return kg.sg_traveling_breather(x, t, params)

    out = []
    for k in range(3):
        dx = 0.05 / 2**k
        dt = 0.025 / 2**k
        grid = kg.Grid1D.from_spacing(-30.0, 80.0, dx)
        sim = kg.SimConfig(model=kg.SineGordon(), grid=grid, dt=dt, t_end=50.0, snapshot_every=10**9)
        result = kg.run(sim, kg.init_from_solution(sol, grid, dt))
        err = float(np.max(np.abs(result.final_state.u_curr - sol(grid.x, result.final_state.t))))
        out.append((dx, err))
    return out


@pytest.fixture(scope="session")
def kink09():
    return kg.kink_profile(0.9)


@pytest.fixture(scope="session")
def harmonics97():
    return kg.solve_third_harmonic(0.97, 1.0 / 6.0)
