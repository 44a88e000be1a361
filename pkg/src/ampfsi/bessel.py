"""Bessel functions J_n and Y_n of small integer order for complex arguments.

Evaluation strategy: ascending power series inside |z| <= 12, Miller's
backward recurrence (J) and Hankel asymptotic expansions plus upward
recurrence (Y) outside.  Principal branch, arg(z) in (-pi, pi]; arguments
with Re(z) < 0 are handled by the integer-order reflection formulas and
Im(z) < 0 by conjugate symmetry.  Target accuracy is ~1e-11 relative on
|z| <= 50, comfortably below the 1e-3-level tolerances of the dispersion
solves built on top.
"""

import cmath
import math

import numpy as np

__all__ = [
    "BesselDomainError",
    "bessel_j",
    "bessel_jp",
    "bessel_jpp",
    "bessel_y",
    "bessel_yp",
    "bessel_ypp",
]

MAX_ORDER = 8
MAX_ABS_Z = 700.0
SERIES_RADIUS = 12.0

_EULER_GAMMA = 0.5772156649015328606


class BesselDomainError(ValueError):
    """Argument or order outside the supported evaluation domain."""


def _check(order, z):
    if not 0 <= order <= MAX_ORDER:
        raise BesselDomainError(f"order {order} outside supported range 0..{MAX_ORDER}")
    if abs(z) >= MAX_ABS_Z:
        raise BesselDomainError(f"|z| = {abs(z):.3g} exceeds overflow guard {MAX_ABS_Z}")


def _j_series(order, z):
    # ascending series; cancellation stays below ~e^|z| * eps, fine for |z| <= 12
    half = z / 2.0
    u = -(half * half)
    term = half**order / math.factorial(order)
    total = term
    for k in range(1, 80):
        term *= u / (k * (k + order))
        total += term
        if abs(term) <= 1e-18 * (abs(total) + 1e-300):
            break
    return total


def _j_miller(nmax, z):
    # backward recurrence for J_0..J_nmax, Im(z) >= 0 assumed by the caller;
    # normalized against sum_n (-i)^n J_n = e^{-iz}, whose magnitude e^{Im z}
    # matches the J's themselves so the sum never cancels catastrophically
    azr = abs(z)
    nstart = int(azr + 15.0 * azr ** (1.0 / 3.0) + 30) + nmax
    f = np.zeros(nstart + 2, dtype=complex)
    f[nstart] = 1e-280
    for k in range(nstart, 0, -1):
        f[k - 1] = (2.0 * k / z) * f[k] - f[k + 1]
        if abs(f[k - 1]) > 1e250:
            f[k - 1 :] *= 1e-250
    weights = (-1j) ** (np.arange(1, nstart + 1) % 4)
    s = f[0] + 2.0 * np.sum(weights * f[1 : nstart + 1])
    scale = cmath.exp(-1j * z) / s
    return f[: nmax + 1] * scale


def _jy01_asymptotic(z):
    # Hankel expansions for orders 0 and 1, |z| > 12
    vals = {}
    for n in (0, 1):
        mu = 4.0 * n * n
        p = 1.0 + 0.0j
        q = (mu - 1.0) / (8.0 * z)
        term_p = 1.0 + 0.0j
        term_q = q
        for k in range(1, 14):
            term_p *= -(mu - (4 * k - 3) ** 2) * (mu - (4 * k - 1) ** 2) / (
                (2 * k - 1) * (2 * k) * 64.0 * z * z
            )
            p += term_p
            term_q *= -(mu - (4 * k - 1) ** 2) * (mu - (4 * k + 1) ** 2) / (
                (2 * k) * (2 * k + 1) * 64.0 * z * z
            )
            q += term_q
            if abs(term_p) < 1e-18 and abs(term_q) < 1e-18:
                break
        chi = z - (0.5 * n + 0.25) * math.pi
        amp = cmath.sqrt(2.0 / (math.pi * z))
        vals[n] = (
            amp * (p * cmath.cos(chi) - q * cmath.sin(chi)),
            amp * (p * cmath.sin(chi) + q * cmath.cos(chi)),
        )
    return vals


def _y_series(order, z):
    # log series, orders 0 and 1 only; upward recurrence supplies the rest
    half = z / 2.0
    logfac = cmath.log(half)
    j_val = _j_series(order, z)
    total = (2.0 / math.pi) * logfac * j_val
    if order > 0:
        fin = 0.0 + 0.0j
        for k in range(order):
            fin += (
                math.factorial(order - 1 - k)
                / math.factorial(k)
                * half ** (2 * k - order)
            )
        total -= fin / math.pi
    psi1 = -_EULER_GAMMA
    psi2 = -_EULER_GAMMA + sum(1.0 / j for j in range(1, order + 1))
    u = -(half * half)
    term = half**order / math.factorial(order)
    total -= term * (psi1 + psi2) / math.pi
    for k in range(1, 80):
        term *= u / (k * (k + order))
        psi1 += 1.0 / k
        psi2 += 1.0 / (k + order)
        contrib = term * (psi1 + psi2) / math.pi
        total -= contrib
        if abs(contrib) <= 1e-18 * (abs(total) + 1e-300):
            break
    return total


def _jy_right_half(nmax, z, need_y=True):
    """J_0..J_nmax and Y_0..Y_nmax for Re(z) >= 0 (z != 0 for Y)."""
    if z.imag < 0.0:
        js, ys = _jy_right_half(nmax, z.conjugate(), need_y)
        return np.conj(js), (np.conj(ys) if ys is not None else None)
    nj = max(nmax, 1)
    if abs(z) <= SERIES_RADIUS:
        js = np.array([_j_series(n, z) for n in range(nj + 1)])
        if not need_y:
            return js[: nmax + 1], None
        y0 = _y_series(0, z)
        y1 = _y_series(1, z)
    else:
        js = _j_miller(nj, z)
        if not need_y:
            return js[: nmax + 1], None
        asym = _jy01_asymptotic(z)
        y0 = asym[0][1]
        y1 = asym[1][1]
    ys = [y0, y1]
    for n in range(1, nmax):
        ys.append((2.0 * n / z) * ys[n] - ys[n - 1])
    return js[: nmax + 1], np.array(ys[: nmax + 1])


def _eval(order, z, kind):
    z = complex(z)
    _check(order, z)
    if kind == "y" and z == 0:
        raise BesselDomainError("Y_n is singular at z = 0")
    if z.real >= 0.0:
        js, ys = _jy_right_half(order, z, need_y=kind == "y")
        return js[order] if kind == "j" else ys[order]
    # reflection to the right half plane (integer order)
    js, ys = _jy_right_half(order, -z, need_y=kind == "y")
    sign = -1.0 if order % 2 else 1.0
    if kind == "j":
        return sign * js[order]
    # Y_n(z e^{+-i pi}) = (-1)^n [Y_n(z) +- 2i J_n(z)]; the upper sign applies
    # when z sits in the upper half plane (arg rotated down by pi)
    rot = 2j if z.imag >= 0.0 else -2j
    return sign * (ys[order] + rot * js[order])


def bessel_j(order: int, z) -> complex:
    """Bessel function of the first kind J_n(z), 0 <= n <= 8, |z| < 700."""
    return complex(_eval(order, z, "j"))


def bessel_y(order: int, z) -> complex:
    """Bessel function of the second kind Y_n(z), principal branch."""
    return complex(_eval(order, z, "y"))


def _signed(fn, order, z):
    # order -1 via Z_{-1} = -Z_1
    if order == -1:
        return -fn(1, z)
    return fn(order, z)


def bessel_jp(order: int, z) -> complex:
    """dJ_n/dz via the recurrence J_n' = (J_{n-1} - J_{n+1})/2."""
    return 0.5 * (_signed(bessel_j, order - 1, z) - bessel_j(order + 1, z))


def bessel_yp(order: int, z) -> complex:
    """dY_n/dz via the recurrence Y_n' = (Y_{n-1} - Y_{n+1})/2."""
    return 0.5 * (_signed(bessel_y, order - 1, z) - bessel_y(order + 1, z))


def _order_m2(fn, order, z):
    if order >= 2:
        return fn(order - 2, z)
    # Z_{-1} = -Z_1, Z_{-2} = Z_2
    return fn(2 - order, z) * (-1.0 if order == 1 else 1.0)


def bessel_jpp(order: int, z) -> complex:
    """d2J_n/dz2 = (J_{n-2} - 2 J_n + J_{n+2})/4."""
    return 0.25 * (_order_m2(bessel_j, order, z) - 2.0 * bessel_j(order, z) + bessel_j(order + 2, z))


def bessel_ypp(order: int, z) -> complex:
    """d2Y_n/dz2 = (Y_{n-2} - 2 Y_n + Y_{n+2})/4."""
    return 0.25 * (_order_m2(bessel_y, order, z) - 2.0 * bessel_y(order, z) + bessel_y(order + 2, z))
