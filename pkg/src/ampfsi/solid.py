"""Fourier-transformed acoustic solid on a 1D collocated grid.

Characteristic variables on grid points y_j = j*dy for j = 1, 0, -1, ..., -J
(j = 1 is the interface ghost point):

    a = sigma22_hat - zp * v_hat   (outgoing, extrapolated at the ghost)
    b = sigma22_hat + zp * v_hat   (incoming, assigned by the interface scheme)
    d = sigma21_hat

Arrays store j descending, index i = 1 - j.  The interior update is the
second-order Lax-Wendroff scheme with the transverse-stress source; d is
advanced by a BDF quadrature (trapezoidal variant available but non-default).
"""

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "ModeParams",
    "SolidLattice",
    "effective_height",
    "lax_wendroff_step",
    "d_quadrature_step",
    "extrapolate_ghost",
    "extrapolate_bottom",
    "to_primitive",
    "from_primitive",
]


def effective_height(kx: float, H: float) -> float:
    """tanh(kx*H)/kx with the analytic kx -> 0 limit H."""
    if H <= 0:
        raise ValueError("H must be positive")
    if kx < 0:
        raise ValueError("kx must be nonnegative")
    if kx * H < 1e-8:
        return H
    return math.tanh(kx * H) / kx


@dataclass(frozen=True)
class ModeParams:
    """One Fourier-mode FSI configuration.

    Physical constants plus derived dimensionless groups.  nu is carried for
    the impedance and oracle formulas only; the model fluid is inviscid.
    """

    kx: float
    H: float
    rho: float
    rhobar: float
    cpbar: float
    dy: float
    dt: float
    nu: float = 0.0

    def __post_init__(self):
        for name in ("H", "rho", "rhobar", "cpbar", "dy", "dt"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if not 0.0 < self.eta <= 1.0:
            raise ValueError("eta out of range (0, 1]")

    @property
    def lambda_x(self) -> float:
        return self.kx * self.cpbar * self.dt

    @property
    def lambda_y(self) -> float:
        return self.cpbar * self.dt / self.dy

    @property
    def zp(self) -> float:
        return self.rhobar * self.cpbar

    @property
    def h_eff(self) -> float:
        # even in kx; negative wavenumbers are allowed on the mode
        return effective_height(abs(self.kx), self.H)

    @property
    def eta(self) -> float:
        return self.h_eff / self.H

    @property
    def mass_ratio(self) -> float:
        """Acoustic mass ratio M = rho*H/(zp*dt)."""
        return self.rho * self.H / (self.zp * self.dt)

    @property
    def mgrid(self) -> float:
        """Grid mass ratio; defined as M*lambda_y so the identity is exact."""
        return self.mass_ratio * self.lambda_y

    @classmethod
    def from_dimensionless(cls, lambda_y, mgrid, lambda_x=0.0, H=1.0, rho=1.0,
                           cpbar=1.0, dt=1.0, nu=0.0):
        """Build physical constants realizing (lambda_y, mgrid, lambda_x).

        Uses rho = cpbar = dt = 1 conventions; kx and eta then follow from
        lambda_x and H (they are not independent in the physical model).
        """
        if lambda_y <= 0 or mgrid <= 0:
            raise ValueError("lambda_y and mgrid must be positive")
        dy = cpbar * dt / lambda_y
        M = mgrid / lambda_y
        zp = rho * H / (M * dt)
        rhobar = zp / cpbar
        kx = lambda_x / (cpbar * dt)
        return cls(kx=kx, H=H, rho=rho, rhobar=rhobar, cpbar=cpbar, dy=dy,
                   dt=dt, nu=nu)


@dataclass
class SolidLattice:
    """Semi-discrete solid state over j = 1, 0, -1, ..., -J (index i = 1-j)."""

    depth: int
    a: np.ndarray = field(default=None)
    b: np.ndarray = field(default=None)
    d: np.ndarray = field(default=None)
    d_prev: np.ndarray = field(default=None)
    level: int = 0

    def __post_init__(self):
        n = self.depth + 2
        for name in ("a", "b", "d", "d_prev"):
            arr = getattr(self, name)
            if arr is None:
                setattr(self, name, np.zeros(n, dtype=complex))
            else:
                arr = np.asarray(arr, dtype=complex)
                if arr.shape != (n,):
                    raise ValueError(f"{name} must have length depth + 2 = {n}")
                setattr(self, name, arr.copy())

    def idx(self, j: int) -> int:
        """Array index of grid point j (j = 1 is the ghost, j = -depth the bottom)."""
        return 1 - j

    def copy(self) -> "SolidLattice":
        return SolidLattice(self.depth, self.a, self.b, self.d, self.d_prev,
                            self.level)


def lax_wendroff_step(lat: SolidLattice, p: ModeParams):
    """Interior Lax-Wendroff update, returning (a, b) at level n+1 for
    j = 0 .. -J+1 (array indices 1..J).  Ghost and bottom rows are untouched.
    """
    lx, ly = p.lambda_x, p.lambda_y
    a, b, d = lat.a, lat.b, lat.d
    J = lat.depth
    c = slice(1, J + 1)       # j = 0 .. -J+1
    up = slice(0, J)          # j + 1
    dn = slice(2, J + 2)      # j - 1
    d0a = a[up] - a[dn]       # delta_0 with j ascending = index descending
    d0b = b[up] - b[dn]
    d0d = d[up] - d[dn]
    dpm_a = a[up] - 2.0 * a[c] + a[dn]
    dpm_b = b[up] - 2.0 * b[c] + b[dn]
    src = b[c] - a[c]
    a_new = (a[c] - 0.5 * ly * d0a + 0.5 * ly * ly * dpm_a
             - 1j * lx * d[c] + 0.25j * lx * ly * d0d + 0.25 * lx * lx * src)
    b_new = (b[c] + 0.5 * ly * d0b + 0.5 * ly * ly * dpm_b
             + 1j * lx * d[c] + 0.25j * lx * ly * d0d - 0.25 * lx * lx * src)
    return a_new, b_new


def d_quadrature_step(lat: SolidLattice, p: ModeParams, a_new, b_new,
                      kind: str = "bdf"):
    """Advance d to level n+1 given the already-updated a, b (full arrays).

    BDF: d^{n+1} = (4/3) d^n - (1/3) d^{n-1} + (i lx / 3)(b^{n+1} - a^{n+1}).
    The trapezoidal variant of an earlier formulation is kept as an option.
    """
    lx = p.lambda_x
    if kind == "bdf":
        return (4.0 / 3.0) * lat.d - (1.0 / 3.0) * lat.d_prev \
            + (1j * lx / 3.0) * (np.asarray(b_new) - np.asarray(a_new))
    if kind == "trapezoid":
        return lat.d + 0.25j * lx * (np.asarray(b_new) - np.asarray(a_new)
                                     + lat.b - lat.a)
    raise ValueError(f"unknown d quadrature {kind!r}")


def extrapolate_ghost(lat: SolidLattice):
    """Outgoing characteristic at the ghost: a_1 = 2 a_0 - a_{-1}."""
    return 2.0 * lat.a[1] - lat.a[2]


def extrapolate_bottom(arr: np.ndarray):
    """Second-order extrapolation closing the artificial bottom row j = -J.

    The analysis problem is semi-infinite; runs must stop before anything
    reflects back from here (t < J*dy/cpbar after the last transient).
    """
    arr[-1] = 2.0 * arr[-2] - arr[-3]


def to_primitive(a, b, d, p: ModeParams):
    """Characteristic -> primitive: (vbar, sigma22, sigma21)."""
    zp = p.zp
    return (b - a) / (2.0 * zp), (b + a) / 2.0, d


def from_primitive(vbar, sigma22, sigma21, p: ModeParams):
    """Primitive -> characteristic: (a, b, d); exact inverse of to_primitive."""
    zp = p.zp
    return sigma22 - zp * vbar, sigma22 + zp * vbar, sigma21
