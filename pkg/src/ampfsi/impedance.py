"""Fluid interface impedances for the added-mass partitioned coupling."""

import math

__all__ = ["fluid_impedance_full", "fluid_impedance_variational"]


def fluid_impedance_full(rho, h, dt, mu, c_am: float = 1.0, c_ad: float = 2.0):
    """Added-mass plus viscous added-damping impedance C_AM rho h/dt + C_AD mu/h."""
    if h <= 0 or dt <= 0 or rho < 0 or mu < 0:
        raise ValueError("need h, dt > 0 and rho, mu >= 0")
    return c_am * rho * h / dt + c_ad * mu / h


def fluid_impedance_variational(k, mu, rho, dt, zbar):
    """Fluid impedance from the variational half-space analysis.

    Solves the interface-condition system for the wall-normal velocity
    response and matches it against v_f = -(1/(zbar + z_f)) n.b_I.  Returns
    (z_f, xi) where z_f = z_mu * xi and z_mu = 2 mu k.

    Limits: z_f -> z_mu for viscous CFL Lambda >> 1 and
    z_f -> (z_mu + zbar)/sqrt(Lambda) for Lambda << 1.
    """
    if min(k, mu, rho, dt, zbar) <= 0:
        raise ValueError("all parameters must be positive")
    z_mu = 2.0 * mu * k
    z_rho = rho / (dt * k)
    lam = mu * k * k * dt / rho
    gamma = math.sqrt(1.0 / lam + 1.0)
    g = 2.0 * lam * (gamma - 1.0)
    z_f = gamma * z_mu + (1.0 - g) * (z_rho + z_mu + gamma * zbar) / (1.0 + g * zbar / z_mu)
    return z_f, z_f / z_mu
