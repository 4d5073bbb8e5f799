"""Closed-form and semi-analytic breather solutions.

The exact sine-Gordon traveling breather is parametrized by an internal
frequency ``omega`` in (0, 1) and an envelope velocity ``v`` with |v| < 1
(Lorentz factor gamma = 1/sqrt(1 - v^2)).  Writing

    zeta  = gamma*x*sqrt(1-omega^2) - t*sqrt(1-omega^2)*sqrt(gamma^2-1)
    phase = gamma*omega*t - omega*x*sqrt(gamma^2-1)

the small-amplitude approximation of any cubic-expandable Klein-Gordon
model is a one-harmonic wave  u = A(zeta) * cos(phase)  with a sech
envelope whose height is fixed by the cubic coefficient beta:

    A(zeta) = sqrt(8*(1-omega^2)/(3*beta)) / cosh(zeta).

``solve_third_harmonic`` computes the (diagnostic) third-harmonic
correction B(zeta) from the linear two-point boundary-value problem

    (1-omega^2) B'' + (9*omega^2 - 1) B = -(beta/4) A^3,   B -> 0 at both ends,

discretized by second-order central differences and solved as a
tridiagonal system.  B is not added to the returned fields; the series
construction requires |A| >> |B| and the solver reports when that
ordering fails.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import solve_banded

from .errors import GridTooNarrow, SingularSystem
from .models import NonlinearityModel, PhysicalScales, cubic_coefficient, to_dimensionless

__all__ = [
    "BreatherParams",
    "HarmonicProfiles",
    "comoving_coordinate",
    "carrier_phase",
    "sg_traveling_breather",
    "sg_standing_breather",
    "envelope_amplitude",
    "small_amplitude_breather",
    "approximate_breather",
    "gsl_breather_dimensional",
    "solve_third_harmonic",
    "third_harmonic_residual",
    "default_zeta_grid",
]


@dataclass(frozen=True)
class BreatherParams:
    """Internal frequency and envelope velocity of a breather.

    0 < omega < 1 and |v| < 1 (velocities in units of the wave speed).
    """

    omega: float
    v: float = 0.0

    def __post_init__(self):
        if not (0.0 < self.omega < 1.0):
            raise ValueError(f"BreatherParams: omega must be in (0, 1), got {self.omega}")
        if not abs(self.v) < 1.0:
            raise ValueError(f"BreatherParams: |v| must be < 1, got {self.v}")

    @property
    def gamma(self) -> float:
        """Lorentz factor 1/sqrt(1 - v^2); equals 1 iff v = 0."""
        return 1.0 / np.sqrt(1.0 - self.v**2)


def comoving_coordinate(x, t, params: BreatherParams):
    """Envelope coordinate zeta; constant along x - v*t = const."""
    g = params.gamma
    s = np.sqrt(1.0 - params.omega**2)
    return g * s * np.asarray(x) - s * np.sqrt(g**2 - 1.0) * np.asarray(t)


def carrier_phase(x, t, params: BreatherParams):
    """Phase of the fast oscillation under the envelope."""
    g = params.gamma
    w = params.omega
    return g * w * np.asarray(t) - w * np.sqrt(g**2 - 1.0) * np.asarray(x)


def sg_traveling_breather(x, t, params: BreatherParams):
    """Exact traveling breather of the sine-Gordon equation."""
    w = params.omega
    ratio = np.sqrt(1.0 - w**2) / w
    return 4.0 * np.arctan(
        ratio * np.cos(carrier_phase(x, t, params)) / np.cosh(comoving_coordinate(x, t, params))
    )


def sg_standing_breather(x, t, omega: float):
    """Exact standing (zero-velocity) sine-Gordon breather, sine phase."""
    if not (0.0 < omega < 1.0):
        raise ValueError(f"sg_standing_breather: omega must be in (0, 1), got {omega}")
    s = np.sqrt(1.0 - omega**2)
    return 4.0 * np.arctan((s / omega) * np.sin(omega * np.asarray(t)) / np.cosh(s * np.asarray(x)))


def envelope_amplitude(zeta, omega: float, beta: float):
    """sech envelope A(zeta) of the one-harmonic breather ansatz."""
    if not (0.0 < omega < 1.0):
        raise ValueError(f"envelope_amplitude: omega must be in (0, 1), got {omega}")
    if not beta > 0.0:
        raise ValueError(f"envelope_amplitude: beta must be > 0, got {beta}")
    peak = np.sqrt(8.0 * (1.0 - omega**2) / (3.0 * beta))
    return peak / np.cosh(zeta)


def small_amplitude_breather(x, t, params: BreatherParams, beta: float):
    """One-harmonic traveling breather A(zeta)*cos(phase) for cubic coefficient beta."""
    amp = envelope_amplitude(comoving_coordinate(x, t, params), params.omega, beta)
    return amp * np.cos(carrier_phase(x, t, params))


def approximate_breather(x, t, params: BreatherParams, model: NonlinearityModel):
    """Small-amplitude breather with beta taken from the model's cubic expansion."""
    return small_amplitude_breather(x, t, params, cubic_coefficient(model))


def gsl_breather_dimensional(x_phys, t_phys, params: BreatherParams, scales: PhysicalScales):
    """Superlattice breather in lab coordinates.

    Rescales (x, t) to the dimensionless frame and evaluates the
    one-harmonic breather with beta = b^2/4 + 1/6.
    """
    x, t = to_dimensionless(x_phys, t_phys, scales)
    beta = scales.b**2 / 4.0 + 1.0 / 6.0
    return small_amplitude_breather(x, t, params, beta)


@dataclass
class HarmonicProfiles:
    """Sampled first- and third-harmonic envelope profiles on a zeta grid."""

    zeta: np.ndarray
    first_harmonic: np.ndarray = field(repr=False)
    third_harmonic: np.ndarray = field(repr=False)


def default_zeta_grid(half_span: float = 25.0, n: int = 2001) -> np.ndarray:
    """Symmetric uniform grid; sech(25) ~ 1e-11 makes tail truncation negligible."""
    return np.linspace(-half_span, half_span, n)


def solve_third_harmonic(omega: float, beta: float, zeta_grid: np.ndarray | None = None) -> HarmonicProfiles:
    """Solve the third-harmonic two-point BVP on a uniform zeta grid.

    Homogeneous Dirichlet conditions at the grid ends select one bounded
    representative of the (oscillatory) solution family.  Raises
    GridTooNarrow when the grid ends before the envelope has decayed to
    1e-6 and SingularSystem when the discrete operator cannot be solved
    (resonant grid) or the series ordering max|B| < max|A| fails.
    """
    if zeta_grid is None:
        zeta_grid = default_zeta_grid()
    zeta = np.asarray(zeta_grid, dtype=float)
    if zeta.ndim != 1 or zeta.size < 16:
        raise ValueError("solve_third_harmonic: zeta_grid must be 1D with >= 16 points")
    h = np.diff(zeta)
    if not np.allclose(h, h[0], rtol=1e-10, atol=0.0):
        raise ValueError("solve_third_harmonic: zeta_grid must be uniform")
    h = float(h[0])
    if 1.0 / np.cosh(min(abs(zeta[0]), abs(zeta[-1]))) > 1e-6:
        raise GridTooNarrow(
            "solve_third_harmonic: envelope tail sech(zeta_end) exceeds 1e-6; widen the grid"
        )

    amp = envelope_amplitude(zeta, omega, beta)
    forcing = -0.25 * beta * amp**3

    # Interior tridiagonal system for (1-w^2) B'' + (9 w^2 - 1) B = forcing.
    n_int = zeta.size - 2
    coeff = 1.0 - omega**2
    diag = np.full(n_int, -2.0 * coeff / h**2 + (9.0 * omega**2 - 1.0))
    off = np.full(n_int - 1, coeff / h**2)
    ab = np.zeros((3, n_int))
    ab[0, 1:] = off
    ab[1, :] = diag
    ab[2, :-1] = off
    try:
        b_int = solve_banded((1, 1), ab, forcing[1:-1])
    except np.linalg.LinAlgError as exc:  # pragma: no cover - requires exact resonance
        raise SingularSystem(f"solve_third_harmonic: tridiagonal solve failed ({exc})") from exc
    if not np.all(np.isfinite(b_int)):
        raise SingularSystem("solve_third_harmonic: non-finite solution (resonant grid)")

    third = np.zeros_like(zeta)
    third[1:-1] = b_int
    profiles = HarmonicProfiles(zeta=zeta, first_harmonic=amp, third_harmonic=third)

    if np.max(np.abs(third)) >= np.max(np.abs(amp)):
        raise SingularSystem(
            "solve_third_harmonic: |B| >= |A|; series ordering broken (near-resonant grid)"
        )
    return profiles


def third_harmonic_residual(profiles: HarmonicProfiles, omega: float, beta: float) -> np.ndarray:
    """Interior residual of the discrete third-harmonic equation."""
    zeta = profiles.zeta
    h = zeta[1] - zeta[0]
    b = profiles.third_harmonic
    lap = (b[2:] - 2.0 * b[1:-1] + b[:-2]) / h**2
    forcing = -0.25 * beta * profiles.first_harmonic[1:-1] ** 3
    return (1.0 - omega**2) * lap + (9.0 * omega**2 - 1.0) * b[1:-1] - forcing
