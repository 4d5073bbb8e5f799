"""Nonlinearity models for the 1D nonlinear Klein-Gordon equation

    u_tt - u_xx + F(u) = 0.

Three restoring forces are supported:

* ``SineGordon``      F(u) = sin(u)
* ``GrapheneSL(b)``   F(u) = sin(u) / sqrt(1 + b^2 (1 - cos u)), the
  dimensionless wave equation for the vector potential in a graphene-based
  superlattice; ``b`` is the miniband half-width ratio.
* ``CubicKG(beta)``   F(u) = u - beta * u^3, the small-amplitude cubic
  truncation shared by the other two.

Every model exposes the force, its potential (normalized to V(0) = 0),
and the coefficient of the cubic term in the small-u expansion
F(u) = u - beta*u^3 + O(u^5).  All evaluations are plain double precision
and accept scalars or numpy arrays.

``PhysicalScales`` carries the dimensional constants of the superlattice
equation; ``to_dimensionless``/``from_dimensionless`` map lab coordinates
onto the rescaled ones in which the equation has unit coefficients.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "SineGordon",
    "GrapheneSL",
    "CubicKG",
    "NonlinearityModel",
    "PhysicalScales",
    "force",
    "potential",
    "cubic_coefficient",
    "to_dimensionless",
    "from_dimensionless",
]


@dataclass(frozen=True)
class SineGordon:
    """Classic sine-Gordon restoring force."""

    def force(self, u):
        return np.sin(u)

    def potential(self, u):
        # 2 sin^2(u/2) == 1 - cos(u), without cancellation near u = 0
        return 2.0 * np.sin(0.5 * np.asarray(u)) ** 2

    def cubic_coefficient(self) -> float:
        return 1.0 / 6.0


@dataclass(frozen=True)
class GrapheneSL:
    """Graphene-superlattice nonlinearity with miniband ratio ``b``.

    b = 0 is allowed and reduces continuously to the sine-Gordon force.
    """

    b: float

    def __post_init__(self):
        if not (self.b >= 0.0 and np.isfinite(self.b)):
            raise ValueError(f"GrapheneSL: b must be >= 0 and finite, got {self.b}")

    def force(self, u):
        # 1 - cos(u) evaluated as 2 sin^2(u/2): keeps small-u accuracy and
        # makes force(-u) == -force(u) bitwise.
        s = 2.0 * self.b**2 * np.sin(0.5 * np.asarray(u)) ** 2
        return np.sin(u) / np.sqrt(1.0 + s)

    def potential(self, u):
        # (2/b^2)(sqrt(1 + b^2(1-cos u)) - 1) rewritten with the conjugate;
        # the rewrite is finite at b = 0 where it becomes 1 - cos(u).
        half_sq = np.sin(0.5 * np.asarray(u)) ** 2
        s = 2.0 * self.b**2 * half_sq
        return 4.0 * half_sq / (np.sqrt(1.0 + s) + 1.0)

    def cubic_coefficient(self) -> float:
        return self.b**2 / 4.0 + 1.0 / 6.0


@dataclass(frozen=True)
class CubicKG:
    """Cubic Klein-Gordon force u - beta*u^3.

    beta = 0 is allowed (linear Klein-Gordon limit).
    """

    beta: float

    def __post_init__(self):
        if not (self.beta >= 0.0 and np.isfinite(self.beta)):
            raise ValueError(f"CubicKG: beta must be >= 0 and finite, got {self.beta}")

    def force(self, u):
        u = np.asarray(u)
        return u - self.beta * u**3

    def potential(self, u):
        u = np.asarray(u)
        return 0.5 * u**2 - 0.25 * self.beta * u**4

    def cubic_coefficient(self) -> float:
        return self.beta


NonlinearityModel = SineGordon | GrapheneSL | CubicKG


def force(model: NonlinearityModel, u):
    """Restoring force F(u) of the model; odd, F(0) = 0."""
    return model.force(u)


def potential(model: NonlinearityModel, u):
    """Potential V(u) with V(0) = 0 and dV/du = force."""
    return model.potential(u)


def cubic_coefficient(model: NonlinearityModel) -> float:
    """Coefficient beta of the small-amplitude expansion F(u) ~ u - beta*u^3."""
    return model.cubic_coefficient()


@dataclass(frozen=True)
class PhysicalScales:
    """Dimensional constants of the superlattice wave equation.

    omega0 : plasma-like frequency (rad / time)
    b      : miniband half-width ratio (dimensionless)
    c      : wave speed (1 in rescaled units)
    """

    omega0: float
    b: float
    c: float = 1.0

    def __post_init__(self):
        if not self.omega0 > 0.0:
            raise ValueError(f"PhysicalScales: omega0 must be > 0, got {self.omega0}")
        if not self.b > 0.0:
            raise ValueError(f"PhysicalScales: b must be > 0, got {self.b}")
        if not self.c > 0.0:
            raise ValueError(f"PhysicalScales: c must be > 0, got {self.c}")


def to_dimensionless(x_phys, t_phys, scales: PhysicalScales):
    """Map lab coordinates to the rescaled ones: x*omega0*b/c, t*omega0*b."""
    k = scales.omega0 * scales.b
    return np.asarray(x_phys) * (k / scales.c), np.asarray(t_phys) * k


def from_dimensionless(x, t, scales: PhysicalScales):
    """Inverse of :func:`to_dimensionless`."""
    k = scales.omega0 * scales.b
    return np.asarray(x) * (scales.c / k), np.asarray(t) / k
