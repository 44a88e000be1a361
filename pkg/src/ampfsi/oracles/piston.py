"""Radial elastic piston: exact solution for radial oscillation of a solid
disk inside an incompressible fluid annulus.

The solid displacement u_r = beta J_1(omega r/cp) sin(omega t) prescribes
the interface motion; matching the (inviscid) radial velocity and stress at
the interface determines the fluid velocity v_r = (R/r) V(t) and pressure.
"""

import math
from dataclasses import dataclass

from ..bessel import bessel_j, bessel_jp

__all__ = ["PistonParams", "piston_interface", "piston_fluid"]


@dataclass(frozen=True)
class PistonParams:
    beta: float
    omega: float
    r0: float
    R: float
    rho: float
    lambdabar: float
    mubar: float
    rhobar: float

    def __post_init__(self):
        if not 0 < self.r0 < self.R:
            raise ValueError("need 0 < r0 < R")
        if min(self.rho, self.rhobar) <= 0 or self.omega <= 0:
            raise ValueError("rho, rhobar and omega must be positive")
        if abs(self.b) >= self.r0:
            raise ValueError("oscillation amplitude reaches the axis")

    @property
    def cpbar(self) -> float:
        return math.sqrt((self.lambdabar + 2.0 * self.mubar) / self.rhobar)

    @property
    def b(self) -> float:
        """Interface displacement amplitude beta*J1(omega r0/cp)."""
        return self.beta * bessel_j(1, self.omega * self.r0 / self.cpbar).real


def piston_interface(p: PistonParams, t: float):
    """Interface radius r_I(t) = r0 + b sin(omega t) and its velocity."""
    if t < 0:
        raise ValueError("t must be nonnegative")
    s = math.sin(p.omega * t)
    c = math.cos(p.omega * t)
    return p.r0 + p.b * s, p.b * p.omega * c


def _v_and_vdot(p: PistonParams, t: float):
    s = math.sin(p.omega * t)
    c = math.cos(p.omega * t)
    r_i = p.r0 + p.b * s
    v = r_i * p.omega * p.b * c / p.R
    vdot = (p.omega * p.b / p.R) * (p.b * p.omega * c * c - r_i * p.omega * s)
    return r_i, v, vdot


def piston_fluid(p: PistonParams, r: float, t: float):
    """Fluid radial velocity and pressure at radius r, time t.

    v_r = (R/r) V(t);
    p(r, t) = P(t) + rho/2 (1 - R^2/r^2) V^2 + rho R log(R/r) Vdot,
    with P(t) fixed by the interface stress matching (inviscid convention).
    """
    r_i, v, vdot = _v_and_vdot(p, t)
    if not r_i <= r <= p.R:
        raise ValueError(f"r = {r} outside the fluid annulus [{r_i:.6g}, {p.R}]")
    s = math.sin(p.omega * t)
    arg = p.omega * p.r0 / p.cpbar
    solid_stress = p.beta * (
        (p.lambdabar + 2.0 * p.mubar) * (p.omega / p.cpbar) * bessel_jp(1, arg).real
        + (p.lambdabar / p.r0) * bessel_j(1, arg).real
    ) * s
    big_p = (
        -0.5 * p.rho * (1.0 - p.R**2 / r_i**2) * v * v
        - p.rho * p.R * math.log(p.R / r_i) * vdot
        - solid_stress
    )
    pressure = (
        big_p
        + 0.5 * p.rho * (1.0 - p.R**2 / r**2) * v * v
        + p.rho * p.R * math.log(p.R / r) * vdot
    )
    return p.R / r * v, pressure
