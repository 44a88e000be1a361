"""Radial traveling wave: Stokes fluid in r < r0 coupled to an elastic
annulus r0 < r < R, modes q(r) e^{i(n theta - omega t)}.

Fluid (constants p_I, d):
    p = p_I (r/r0)^n
    v_r = d J_n(lam r)/r + p_I n r^{n-1}/(mu lam^2 r0^n)
    v_theta = d (i lam/n) J_n'(lam r) + p_I i n r^{n-1}/(mu lam^2 r0^n)

Solid (constants dbar_1..dbar_4 via potentials):
    phi = dbar1 J_n(kp r) + dbar2 Y_n(kp r),  H = dbar3 J_n(ks r) + dbar4 Y_n(ks r)
    u_r = phi' + (i n/r) H,   u_theta = (i n/r) phi - H'

Traction-free outer boundary plus velocity/stress matching at r0 give the
6x6 homogeneous system M d = 0; det M = 0 is the dispersion relation.
Decaying modes have Im(omega) < 0 under this time convention, and roots come
in pairs (omega, -conj(omega)).
"""

import cmath
import math
from dataclasses import dataclass

import numpy as np

from ..bessel import bessel_j, bessel_jp, bessel_jpp, bessel_y, bessel_yp, bessel_ypp

__all__ = [
    "TravelingWaveProblem",
    "traveling_wave_matrix",
    "traveling_wave_det",
    "traveling_wave_solve",
    "traveling_wave_fields",
]


@dataclass(frozen=True)
class TravelingWaveProblem:
    n: int
    r0: float
    R: float
    rho: float
    nu: float
    mubar: float
    lambdabar: float
    rhobar: float
    u0bar: float

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be a positive integer")
        if not 0 < self.r0 < self.R:
            raise ValueError("need 0 < r0 < R")
        if min(self.rho, self.nu, self.mubar, self.rhobar, self.u0bar) <= 0:
            raise ValueError("physical parameters must be positive")

    @property
    def cpbar(self) -> float:
        return math.sqrt((self.lambdabar + 2.0 * self.mubar) / self.rhobar)

    @property
    def csbar(self) -> float:
        return math.sqrt(self.mubar / self.rhobar)

    @property
    def mu(self) -> float:
        return self.rho * self.nu


def _wavenumbers(prob, omega):
    lam = cmath.sqrt(1j * omega / prob.nu)
    return lam, omega / prob.cpbar, omega / prob.csbar


def _fluid_cols(prob, omega, r):
    """Columns (p_I, d) of (v_r, v_theta, p, sigma_rr, sigma_rtheta) at r."""
    n = prob.n
    mu = prob.mu
    lam, _, _ = _wavenumbers(prob, omega)
    pref = r ** (n - 1) / (mu * lam * lam * prob.r0**n)
    vr = np.array([n * pref, bessel_j(n, lam * r) / r])
    vth = np.array([1j * n * pref, (1j * lam / n) * bessel_jp(n, lam * r)])
    p = np.array([(r / prob.r0) ** n, 0.0])
    vr_p = np.array([
        n * (n - 1) * r ** (n - 2) / (mu * lam * lam * prob.r0**n),
        (lam * bessel_jp(n, lam * r) * r - bessel_j(n, lam * r)) / (r * r),
    ])
    vth_p = np.array([
        1j * n * (n - 1) * r ** (n - 2) / (mu * lam * lam * prob.r0**n),
        (1j * lam * lam / n) * bessel_jpp(n, lam * r),
    ])
    srr = -p + 2.0 * mu * vr_p
    srt = mu * ((1j * n / r) * vr + vth_p - vth / r)
    return vr, vth, p, srr, srt


def _solid_cols(prob, omega, r):
    """Columns (dbar1..dbar4) of (u_r, u_theta, sigma_rr, sigma_rtheta) at r."""
    n = prob.n
    mubar, lambdabar = prob.mubar, prob.lambdabar
    _, kp, ks = _wavenumbers(prob, omega)
    zp = kp * r
    zs = ks * r
    phi = np.array([bessel_j(n, zp), bessel_y(n, zp), 0.0, 0.0])
    phi_p = kp * np.array([bessel_jp(n, zp), bessel_yp(n, zp), 0.0, 0.0])
    phi_pp = kp * kp * np.array([bessel_jpp(n, zp), bessel_ypp(n, zp), 0.0, 0.0])
    hh = np.array([0.0, 0.0, bessel_j(n, zs), bessel_y(n, zs)])
    hh_p = ks * np.array([0.0, 0.0, bessel_jp(n, zs), bessel_yp(n, zs)])
    hh_pp = ks * ks * np.array([0.0, 0.0, bessel_jpp(n, zs), bessel_ypp(n, zs)])
    ur = phi_p + (1j * n / r) * hh
    uth = (1j * n / r) * phi - hh_p
    srr = ((2.0 * mubar + lambdabar) * phi_pp
           + (lambdabar / r) * (phi_p - (n * n / r) * phi)
           + (2j * mubar * n / r) * (hh_p - hh / r))
    srt = (-mubar * hh_pp + (mubar / r) * (hh_p - (n * n / r) * hh)
           + (2j * mubar * n / r) * (phi_p - phi / r))
    return ur, uth, srr, srt


def traveling_wave_matrix(prob: TravelingWaveProblem, omega) -> np.ndarray:
    """6x6 system matrix over constants d = (p_I, d, dbar1..dbar4).

    Rows: sigma_rr(R) = 0, sigma_rtheta(R) = 0, velocity matching (both
    components, v = -i omega u) and stress matching at r0.
    """
    omega = complex(omega)
    if omega == 0:
        raise ValueError("omega must be nonzero")
    m = np.zeros((6, 6), dtype=complex)
    ur_R, uth_R, srr_R, srt_R = _solid_cols(prob, omega, prob.R)
    vr, vth, _, f_srr, f_srt = _fluid_cols(prob, omega, prob.r0)
    ur, uth, s_srr, s_srt = _solid_cols(prob, omega, prob.r0)
    m[0, 2:] = srr_R
    m[1, 2:] = srt_R
    m[2, :2] = vr
    m[2, 2:] = 1j * omega * ur
    m[3, :2] = vth
    m[3, 2:] = 1j * omega * uth
    m[4, :2] = f_srr
    m[4, 2:] = -s_srr
    m[5, :2] = f_srt
    m[5, 2:] = -s_srt
    return m


def traveling_wave_det(prob: TravelingWaveProblem, omega) -> complex:
    """Determinant of the row-normalized system matrix (conditioning guard
    against the Y_n growth); zero exactly at the dispersion roots."""
    m = traveling_wave_matrix(prob, omega)
    scales = np.max(np.abs(m), axis=1)
    scales[scales == 0] = 1.0
    return complex(np.linalg.det(m / scales[:, None]))


def _row_residuals(prob, omega, d):
    m = traveling_wave_matrix(prob, omega)
    scales = np.max(np.abs(m), axis=1) * np.max(np.abs(d))
    scales[scales == 0] = 1.0
    return tuple(np.abs(m @ d) / scales)


def traveling_wave_solve(prob: TravelingWaveProblem, seed):
    """Solve det M(omega) = 0 near the seed and extract the null constants,
    rescaled so the initial interface displacement magnitude is u0bar."""
    from . import DispersionMode
    from ..numerics import find_root, null_vector

    scale = max(abs(traveling_wave_det(prob, seed)),
                abs(traveling_wave_det(prob, seed * 1.03 + 0.01j)))
    omega = find_root(lambda w: traveling_wave_det(prob, w), seed,
                      tol=max(1e-12 * scale, 1e-300))
    m = traveling_wave_matrix(prob, omega)
    scales = np.max(np.abs(m), axis=1)
    scales[scales == 0] = 1.0
    d = null_vector(m / scales[:, None])
    ur, uth, _, _ = _solid_cols(prob, omega, prob.r0)
    # deterministic phase: dominant interface displacement made real positive
    uc_r = complex(ur @ d[2:])
    uc_t = complex(uth @ d[2:])
    ref = uc_r if abs(uc_r) >= abs(uc_t) else uc_t
    if abs(ref) == 0:
        raise RuntimeError("degenerate null vector: no interface displacement")
    d = d * (abs(ref) / ref)
    mag = math.sqrt((ur @ d[2:]).real ** 2 + (uth @ d[2:]).real ** 2)
    d = d * (prob.u0bar / mag)
    return DispersionMode(omega=omega, constants=tuple(d),
                          residuals=_row_residuals(prob, omega, d))


def traveling_wave_fields(prob: TravelingWaveProblem, mode, r, theta, t):
    """Real fields at (r, theta, t): (v_r, v_theta, p) in the fluid disk and
    (u_r, u_theta) in the solid annulus; entries outside their domain are None."""
    omega = mode.omega
    d = np.asarray(mode.constants)
    phase = cmath.exp(1j * (prob.n * theta - omega * t))
    v_r = v_th = p = u_r = u_th = None
    if r < 0 or r > prob.R + 1e-12:
        raise ValueError(f"r = {r} outside [0, {prob.R}]")
    if r <= prob.r0 and r > 0:
        vr, vth, pp, _, _ = _fluid_cols(prob, omega, r)
        v_r = ((vr @ d[:2]) * phase).real
        v_th = ((vth @ d[:2]) * phase).real
        p = ((pp @ d[:2]) * phase).real
    if r >= prob.r0:
        ur, uth, _, _ = _solid_cols(prob, omega, r)
        u_r = ((ur @ d[2:]) * phase).real
        u_th = ((uth @ d[2:]) * phase).real
    return v_r, v_th, p, u_r, u_th
