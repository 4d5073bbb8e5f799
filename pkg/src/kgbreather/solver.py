"""Explicit finite-difference integration of u_tt - u_xx + F(u) = 0.

Scheme: three-level leapfrog (Stormer), second order in space and time,
time reversible:

    u_next = 2*u_curr - u_prev + dt^2 * (Lap u_curr - F(u_curr))

with the standard second-difference Laplacian.  Boundaries are either
homogeneous Dirichlet (endpoints pinned to zero; the domain is sized so
pulses never reach them) or periodic.  Initial data is supplied as two
exact time levels of a known solution, which avoids a Taylor start.

The discrete energy reported alongside snapshots is centered at the
half step t - dt/2 shared by (u_prev, u_curr):

    E = sum dx * [ v^2/2 + w_x^2/2 + V(w) ],
    v = (u_curr - u_prev)/dt,  w = (u_curr + u_prev)/2,

which for the models in scope is conserved to a small bounded
oscillation until radiation reaches a Dirichlet boundary.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    CflViolation,
    GridTooSmall,
    InvalidParam,
    NonFiniteSample,
    NumericalBlowup,
)
from .models import NonlinearityModel, force, potential

__all__ = [
    "DIRICHLET0",
    "PERIODIC",
    "Grid1D",
    "FieldState",
    "SimConfig",
    "EnergyRecord",
    "ProbeSeries",
    "RunResult",
    "init_from_solution",
    "step",
    "energy",
    "run",
]

DIRICHLET0 = "dirichlet0"
PERIODIC = "periodic"
_BOUNDARIES = (DIRICHLET0, PERIODIC)

# Explicit-scheme stability margin and runaway guard.
CFL_LIMIT = 0.9
BLOWUP_THRESHOLD = 1.0e6


def _check_boundary(boundary: str) -> str:
    if boundary not in _BOUNDARIES:
        raise InvalidParam(f"boundary must be one of {_BOUNDARIES}, got {boundary!r}")
    return boundary


@dataclass(frozen=True)
class Grid1D:
    """Uniform spatial grid on [x_min, x_max] with nx samples."""

    x_min: float
    x_max: float
    nx: int

    def __post_init__(self):
        if self.nx < 16:
            raise InvalidParam(f"Grid1D: nx must be >= 16, got {self.nx}")
        if not self.x_max > self.x_min:
            raise InvalidParam(f"Grid1D: x_max must exceed x_min, got [{self.x_min}, {self.x_max}]")

    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / (self.nx - 1)

    @property
    def x(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.nx)

    @classmethod
    def from_spacing(cls, x_min: float, x_max: float, dx: float) -> "Grid1D":
        """Grid with spacing as close to dx as an integer sample count allows."""
        if not dx > 0.0:
            raise InvalidParam(f"Grid1D.from_spacing: dx must be > 0, got {dx}")
        nx = int(round((x_max - x_min) / dx)) + 1
        return cls(x_min, x_max, nx)


@dataclass(frozen=True)
class FieldState:
    """Two consecutive time levels of the field on a grid.

    u_prev is the field at t - dt, u_curr at t; together they carry the
    O(dt^2)-accurate time derivative the leapfrog scheme needs.
    """

    grid: Grid1D
    u_prev: np.ndarray = field(repr=False)
    u_curr: np.ndarray = field(repr=False)
    t: float
    dt: float

    def __post_init__(self):
        object.__setattr__(self, "u_prev", np.asarray(self.u_prev, dtype=float))
        object.__setattr__(self, "u_curr", np.asarray(self.u_curr, dtype=float))
        if self.u_prev.shape != (self.grid.nx,) or self.u_curr.shape != (self.grid.nx,):
            raise InvalidParam(
                f"FieldState: field arrays must have shape ({self.grid.nx},), "
                f"got {self.u_prev.shape} and {self.u_curr.shape}"
            )
        if not self.dt > 0.0:
            raise InvalidParam(f"FieldState: dt must be > 0, got {self.dt}")
        if self.dt / self.grid.dx > 1.0:
            raise CflViolation(
                f"FieldState: dt/dx = {self.dt / self.grid.dx:.4f} exceeds 1; "
                "the explicit scheme is unconditionally unstable there"
            )


@dataclass(frozen=True)
class SimConfig:
    """Everything one integration run needs besides the initial state."""

    model: NonlinearityModel
    grid: Grid1D
    dt: float
    t_end: float
    boundary: str = DIRICHLET0
    snapshot_every: int = 1000
    probe_x: tuple[float, ...] = ()

    def __post_init__(self):
        if not self.dt > 0.0:
            raise InvalidParam(f"SimConfig: dt must be > 0, got {self.dt}")
        if self.dt / self.grid.dx > CFL_LIMIT:
            raise CflViolation(
                f"SimConfig: dt/dx = {self.dt / self.grid.dx:.4f} exceeds the margin {CFL_LIMIT}"
            )
        if not self.t_end > 0.0:
            raise InvalidParam(f"SimConfig: t_end must be > 0, got {self.t_end}")
        if self.snapshot_every < 1:
            raise InvalidParam(f"SimConfig: snapshot_every must be >= 1, got {self.snapshot_every}")
        _check_boundary(self.boundary)
        for px in self.probe_x:
            if not (self.grid.x_min <= px <= self.grid.x_max):
                raise InvalidParam(f"SimConfig: probe x = {px} outside grid")


@dataclass(frozen=True)
class EnergyRecord:
    t: float
    E: float


@dataclass(frozen=True)
class ProbeSeries:
    """Field values at fixed grid points, recorded every time step."""

    x: np.ndarray
    t: np.ndarray = field(repr=False)
    u: np.ndarray = field(repr=False)  # shape (len(t), len(x))


@dataclass(frozen=True)
class RunResult:
    config: SimConfig
    snapshot_times: np.ndarray = field(repr=False)
    snapshots: np.ndarray = field(repr=False)  # shape (len(snapshot_times), nx)
    energies: tuple[EnergyRecord, ...] = field(repr=False)
    final_state: FieldState = field(repr=False)
    probes: ProbeSeries | None = field(default=None, repr=False)


def init_from_solution(sol, grid: Grid1D, dt: float) -> FieldState:
    """Sample a solution u(x, t) at t = 0 and t = dt as the two starting levels."""
    x = grid.x
    u_prev = np.asarray(sol(x, 0.0), dtype=float)
    u_curr = np.asarray(sol(x, dt), dtype=float)
    if not (np.all(np.isfinite(u_prev)) and np.all(np.isfinite(u_curr))):
        raise NonFiniteSample("init_from_solution: solution is not finite on the grid")
    return FieldState(grid=grid, u_prev=u_prev, u_curr=u_curr, t=dt, dt=dt)


def _laplacian(u: np.ndarray, dx: float, boundary: str) -> np.ndarray:
    lap = np.empty_like(u)
    lap[1:-1] = (u[2:] - 2.0 * u[1:-1] + u[:-2]) / dx**2
    if boundary == PERIODIC:
        lap[0] = (u[1] - 2.0 * u[0] + u[-2]) / dx**2
        lap[-1] = lap[0]
    else:
        # Dirichlet endpoints are pinned after the update; values here unused.
        lap[0] = 0.0
        lap[-1] = 0.0
    return lap


def step(state: FieldState, model: NonlinearityModel, boundary: str = DIRICHLET0) -> FieldState:
    """Advance one leapfrog step."""
    _check_boundary(boundary)
    dx = state.grid.dx
    dt = state.dt
    if dt / dx > CFL_LIMIT:
        raise CflViolation(
            f"step: dt/dx = {dt / dx:.4f} exceeds the enforced margin {CFL_LIMIT}"
        )
    u = state.u_curr
    u_next = 2.0 * u - state.u_prev + dt**2 * (_laplacian(u, dx, boundary) - force(model, u))
    if boundary == DIRICHLET0:
        u_next[0] = 0.0
        u_next[-1] = 0.0
    if not np.all(np.abs(u_next) <= BLOWUP_THRESHOLD):
        raise NumericalBlowup(
            f"step: max|u| exceeded {BLOWUP_THRESHOLD:g} at t = {state.t + dt:g}"
        )
    return FieldState(grid=state.grid, u_prev=u, u_curr=u_next, t=state.t + dt, dt=dt)


def energy(
    state: FieldState,
    model: NonlinearityModel,
    grid: Grid1D | None = None,
    boundary: str = DIRICHLET0,
) -> EnergyRecord:
    """Discrete total energy centered at t - dt/2 (see module docstring)."""
    _check_boundary(boundary)
    if grid is None:
        grid = state.grid
    dx = grid.dx
    v = (state.u_curr - state.u_prev) / state.dt
    w = 0.5 * (state.u_curr + state.u_prev)
    wx = np.empty_like(w)
    wx[1:-1] = (w[2:] - w[:-2]) / (2.0 * dx)
    if boundary == PERIODIC:
        wx[0] = (w[1] - w[-2]) / (2.0 * dx)
        wx[-1] = wx[0]
    else:
        wx[0] = (w[1] - w[0]) / dx
        wx[-1] = (w[-1] - w[-2]) / dx
    dens = 0.5 * v**2 + 0.5 * wx**2 + potential(model, w)
    if boundary == PERIODIC:
        # the last node duplicates the first; count each physical cell once
        dens = dens[:-1]
    return EnergyRecord(t=state.t - 0.5 * state.dt, E=float(np.sum(dens) * dx))


def run(config: SimConfig, initial: FieldState) -> RunResult:
    """Integrate to t_end, recording snapshots, energies, and probe series."""
    if initial.grid != config.grid:
        raise InvalidParam("run: initial state grid differs from config grid")
    if initial.dt != config.dt:
        raise InvalidParam("run: initial state dt differs from config dt")
    if config.dt / config.grid.dx > CFL_LIMIT:
        raise CflViolation(
            f"run: dt/dx = {config.dt / config.grid.dx:.4f} exceeds the margin {CFL_LIMIT}"
        )

    n_steps = int(round((config.t_end - initial.t) / config.dt))
    if n_steps < 0:
        raise InvalidParam("run: t_end precedes the initial time")

    probe_idx = np.array(
        [int(round((px - config.grid.x_min) / config.grid.dx)) for px in config.probe_x],
        dtype=int,
    )

    state = initial
    snap_times = [state.t]
    snaps = [state.u_curr.copy()]
    energies = [energy(state, config.model, boundary=config.boundary)]
    probe_t = [state.t] if probe_idx.size else []
    probe_u = [state.u_curr[probe_idx].copy()] if probe_idx.size else []

    for k in range(1, n_steps + 1):
        state = step(state, config.model, config.boundary)
        if probe_idx.size:
            probe_t.append(state.t)
            probe_u.append(state.u_curr[probe_idx].copy())
        if k % config.snapshot_every == 0 or k == n_steps:
            snap_times.append(state.t)
            snaps.append(state.u_curr.copy())
            energies.append(energy(state, config.model, boundary=config.boundary))

    probes = None
    if probe_idx.size:
        probes = ProbeSeries(x=config.grid.x[probe_idx], t=np.asarray(probe_t), u=np.vstack(probe_u))
    return RunResult(
        config=config,
        snapshot_times=np.asarray(snap_times),
        snapshots=np.vstack(snaps),
        energies=tuple(energies),
        final_state=state,
        probes=probes,
    )
