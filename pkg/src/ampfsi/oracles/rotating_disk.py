"""Rotating elastic disk in a viscous fluid annulus: circumferential modes
v_theta = vhat(r) e^{i omega t}, u_theta = uhat(r) e^{i omega t} with

    vhat(r) = b [J1(lam r) Y1(lam R) - J1(lam R) Y1(lam r)],
    uhat(r) = bbar J1(ks r),       lam^2 = -i omega/nu,  ks = omega/cs.

Matching velocity and shear stress at r0 yields the dispersion function D2;
decaying modes have Im(omega) > 0 under this time convention.  (Note the
sign of lam^2: with the e^{+i omega t} factor the viscous operator gives
lam^2 = -i omega/nu; the benchmark frequency table is only reproduced with
this branch.)
"""

import cmath
import math
from dataclasses import dataclass

from ..bessel import bessel_j, bessel_y

__all__ = [
    "RotatingDiskProblem",
    "rotating_disk_residual",
    "rotating_disk_solve",
    "rotating_disk_fields",
    "adaptive_simpson",
]


@dataclass(frozen=True)
class RotatingDiskProblem:
    r0: float
    R: float
    rho: float
    nu: float
    mubar: float
    rhobar: float
    u0bar: float

    def __post_init__(self):
        if not 0 < self.r0 < self.R:
            raise ValueError("need 0 < r0 < R")
        if min(self.rho, self.nu, self.mubar, self.rhobar, self.u0bar) <= 0:
            raise ValueError("physical parameters must be positive")

    @property
    def csbar(self) -> float:
        return math.sqrt(self.mubar / self.rhobar)

    @property
    def mu(self) -> float:
        return self.rho * self.nu


def _lam(prob, omega):
    # e^{+i omega t} convention: i omega v = nu (laplacian - 1/r^2) v
    return cmath.sqrt(-1j * omega / prob.nu)


def rotating_disk_residual(prob: RotatingDiskProblem, omega) -> complex:
    """Dispersion function D2(omega); roots are the disk's complex modes."""
    omega = complex(omega)
    if omega == 0:
        raise ValueError("omega must be nonzero")
    lam = _lam(prob, omega)
    ks = omega / prob.csbar
    w_vel = (bessel_j(1, lam * prob.r0) * bessel_y(1, lam * prob.R)
             - bessel_j(1, lam * prob.R) * bessel_y(1, lam * prob.r0))
    w_str = (bessel_j(2, lam * prob.r0) * bessel_y(1, lam * prob.R)
             - bessel_j(1, lam * prob.R) * bessel_y(2, lam * prob.r0))
    return (prob.mubar * ks * bessel_j(2, ks * prob.r0) * w_vel
            - 1j * omega * prob.mu * lam * bessel_j(1, ks * prob.r0) * w_str)


def _constants(prob, omega):
    """(b, bbar) from the interface matching at a dispersion root.

    bbar = u0/J1(ks r0); b comes from the velocity matching
    vhat(r0) = i omega uhat(r0), i.e. b * W(r0) = i omega u0.
    """
    lam = _lam(prob, omega)
    ks = omega / prob.csbar
    bbar = prob.u0bar / bessel_j(1, ks * prob.r0)
    w_vel = (bessel_j(1, lam * prob.r0) * bessel_y(1, lam * prob.R)
             - bessel_j(1, lam * prob.R) * bessel_y(1, lam * prob.r0))
    b = 1j * omega * prob.u0bar / w_vel
    return b, bbar


def _matching_residuals(prob, omega, b, bbar):
    lam = _lam(prob, omega)
    ks = omega / prob.csbar
    w_vel = (bessel_j(1, lam * prob.r0) * bessel_y(1, lam * prob.R)
             - bessel_j(1, lam * prob.R) * bessel_y(1, lam * prob.r0))
    w_str = (bessel_j(2, lam * prob.r0) * bessel_y(1, lam * prob.R)
             - bessel_j(1, lam * prob.R) * bessel_y(2, lam * prob.r0))
    # velocity: b W = i omega bbar J1(ks r0); stress (d/dr of q/r forms):
    # mu b lam W_str = mubar bbar ks J2(ks r0)
    vel_lhs = b * w_vel
    vel_rhs = 1j * omega * bbar * bessel_j(1, ks * prob.r0)
    str_lhs = prob.mu * b * lam * w_str
    str_rhs = prob.mubar * bbar * ks * bessel_j(2, ks * prob.r0)
    sv = max(abs(vel_lhs), abs(vel_rhs), 1e-300)
    ss = max(abs(str_lhs), abs(str_rhs), 1e-300)
    return abs(vel_lhs - vel_rhs) / sv, abs(str_lhs - str_rhs) / ss


def rotating_disk_solve(prob: RotatingDiskProblem, seed):
    """Newton-solve D2(omega) = 0 from a seed and certify both matching
    conditions; returns a mode with constants (b, bbar)."""
    from . import DispersionMode
    from ..numerics import find_root

    # characteristic residual scale taken off-root so the tolerance stays
    # meaningful when the seed already sits on the root
    scale = max(abs(rotating_disk_residual(prob, seed)),
                abs(rotating_disk_residual(prob, seed * 1.03 + 0.01j)))
    omega = find_root(lambda w: rotating_disk_residual(prob, w), seed,
                      tol=max(1e-11 * scale, 1e-300))
    b, bbar = _constants(prob, omega)
    res = _matching_residuals(prob, omega, b, bbar)
    return DispersionMode(omega=omega, constants=(b, bbar), residuals=res)


def rotating_disk_fields(prob: RotatingDiskProblem, mode, r: float, t: float):
    """Physical fields at (r, t): fluid v_theta (annulus), solid u_theta
    (disk), and the pressure rho int vtheta^2/s ds with p(r0) = 0."""
    omega = mode.omega
    b, bbar = mode.constants
    lam = _lam(prob, omega)
    ks = omega / prob.csbar
    rot = cmath.exp(1j * omega * t)

    def vtheta(s):
        vhat = b * (bessel_j(1, lam * s) * bessel_y(1, lam * prob.R)
                    - bessel_j(1, lam * prob.R) * bessel_y(1, lam * s))
        return (vhat * rot).real

    if r < 0 or r > prob.R + 1e-12:
        raise ValueError(f"r = {r} outside [0, {prob.R}]")
    if r < prob.r0:
        u = (bbar * bessel_j(1, ks * r) * rot).real
        return None, u, None
    u = (bbar * bessel_j(1, ks * r) * rot).real if r == prob.r0 else None
    v = vtheta(min(r, prob.R))
    if r == prob.r0:
        pressure = 0.0
    else:
        pressure = prob.rho * adaptive_simpson(
            lambda s: vtheta(s) ** 2 / s, prob.r0, min(r, prob.R), 1e-10)
    return v, u, pressure


def adaptive_simpson(f, a, b, tol):
    """Classic recursive adaptive Simpson quadrature (absolute tolerance)."""
    fa, fb = f(a), f(b)
    m = 0.5 * (a + b)
    fm = f(m)
    whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    return _simpson_rec(f, a, b, fa, fm, fb, whole, tol, 30)


def _simpson_rec(f, a, b, fa, fm, fb, whole, tol, depth):
    m = 0.5 * (a + b)
    lm = 0.5 * (a + m)
    rm = 0.5 * (m + b)
    flm, frm = f(lm), f(rm)
    left = (m - a) / 6.0 * (fa + 4.0 * flm + fm)
    right = (b - m) / 6.0 * (fm + 4.0 * frm + fb)
    if depth <= 0 or abs(left + right - whole) <= 15.0 * tol:
        return left + right + (left + right - whole) / 15.0
    half = 0.5 * tol
    return (_simpson_rec(f, a, m, fa, flm, fm, left, half, depth - 1)
            + _simpson_rec(f, m, b, fm, frm, fb, right, half, depth - 1))
