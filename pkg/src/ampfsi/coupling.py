"""Fluid Fourier-mode closures: the AMP, TP, iterated-TP and ATP partitioned
interface schemes, a time stepper over a SolidLattice, and the exact 1D
interface-velocity solution used as a convergence oracle.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad

from .impedance import fluid_impedance_full
from .solid import (
    ModeParams,
    SolidLattice,
    d_quadrature_step,
    effective_height,
    extrapolate_bottom,
    extrapolate_ghost,
    lax_wendroff_step,
)

__all__ = [
    "DegenerateParametersError",
    "InterfaceHistory",
    "Scheme",
    "ClosureResult",
    "amp_step",
    "tp_step",
    "atp_step",
    "tp_iterate",
    "advance",
    "exact_interface_1d",
    "effective_height",
]


class DegenerateParametersError(ValueError):
    """The implicit AMP closure became numerically singular."""


@dataclass
class InterfaceHistory:
    """Time-level ring of interface velocity, pressure and fluid prediction."""

    v_n: complex = 0.0
    v_nm1: complex = 0.0
    p_n: complex = 0.0
    p_nm1: complex = 0.0
    v_f: complex = 0.0

    def push(self, v_new, p_new, v_f_new):
        self.v_nm1 = self.v_n
        self.v_n = v_new
        self.p_nm1 = self.p_n
        self.p_n = p_new
        self.v_f = v_f_new

    @classmethod
    def seeded(cls, lat: SolidLattice, p: ModeParams):
        """Consistent startup: velocity/pressure read off the initial solid
        state and copied into both back levels (one first-order step)."""
        v0 = (lat.b[1] - lat.a[1]) / (2.0 * p.zp)
        p0 = -(lat.b[1] + lat.a[1]) / 2.0
        return cls(v_n=v0, v_nm1=v0, p_n=p0, p_nm1=p0, v_f=v0)


@dataclass(frozen=True)
class Scheme:
    """Partitioned coupling scheme selector.

    kind: 'amp', 'tp', 'tp-iter' or 'atp'.  For AMP, zf_model picks the fluid
    impedance: 'model' = rho*H/dt, 'monolithic' = C_AM rho*h/dt + C_AD mu/h.
    omega/max_iters/tol configure the under-relaxed TP sub-iterations.
    """

    kind: str
    zf_model: str = "model"
    omega: float = 1.0
    max_iters: int = 1
    tol: float = 1e-10

    def __post_init__(self):
        if self.kind not in ("amp", "tp", "tp-iter", "atp"):
            raise ValueError(f"unknown scheme kind {self.kind!r}")
        if self.zf_model not in ("model", "monolithic"):
            raise ValueError(f"unknown zf model {self.zf_model!r}")
        if not 0.0 < self.omega <= 1.0:
            raise ValueError("omega must lie in (0, 1]")
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")

    @classmethod
    def amp(cls, zf_model="model"):
        return cls(kind="amp", zf_model=zf_model)

    @classmethod
    def tp(cls):
        return cls(kind="tp")

    @classmethod
    def tp_iterated(cls, omega, max_iters=100, tol=1e-10):
        return cls(kind="tp-iter", omega=omega, max_iters=max_iters, tol=tol)

    @classmethod
    def atp(cls):
        return cls(kind="atp")


@dataclass(frozen=True)
class ClosureResult:
    v_I: complex
    p_I: complex
    b1: complex
    a1: complex
    v_f: complex


def _solid_trace(lat: SolidLattice, p: ModeParams):
    v_s = (lat.b[1] - lat.a[1]) / (2.0 * p.zp)
    sigma_s = (lat.b[1] + lat.a[1]) / 2.0
    return v_s, sigma_s


def amp_step(lat: SolidLattice, h: InterfaceHistory, p: ModeParams,
             zf_model: str = "model") -> ClosureResult:
    """Added-mass partitioned closure at level n+1.

    The three coupled relations (BDF fluid prediction, impedance-weighted
    velocity average, Robin pressure) are eliminated in closed form to a
    single linear equation for v_I and back-substituted.
    """
    v_s, sigma_s = _solid_trace(lat, p)
    zp = p.zp
    heff = p.h_eff
    m = p.mass_ratio * p.eta
    if zf_model == "model":
        zf = p.rho * p.H / p.dt
    elif zf_model == "monolithic":
        zf = fluid_impedance_full(p.rho, p.dy, p.dt, p.rho * p.nu)
    else:
        raise ValueError(f"unknown zf model {zf_model!r}")
    w_f = zf / (zf + zp)
    w_s = zp / (zf + zp)
    beta = 2.0 * p.dt / (3.0 * p.rho * heff)
    alpha = p.rho * heff / ((m + 1.0) * p.dt)
    xi = m / (m + 1.0)
    c1 = (4.0 / 3.0) * h.v_n - (1.0 / 3.0) * h.v_nm1
    denom = 1.0 - 1.5 * w_f * beta * alpha
    if abs(denom) < 1e-14:
        raise DegenerateParametersError(f"closure denominator {denom:.3e}")
    v_I = (w_f * c1 + w_s * v_s
           + w_f * beta * (alpha * (-2.0 * h.v_n + 0.5 * h.v_nm1)
                           - xi * sigma_s)) / denom
    vdot = (1.5 * v_I - 2.0 * h.v_n + 0.5 * h.v_nm1) / p.dt
    p_I = p.rho * heff * vdot / (m + 1.0) - xi * sigma_s
    v_f = c1 + beta * p_I
    sigma_I = -p_I
    a1 = extrapolate_ghost(lat)
    b1 = -lat.b[2] + 2.0 * (sigma_I + zp * v_I)
    return ClosureResult(v_I, p_I, b1, a1, v_f)


def tp_step(lat: SolidLattice, h: InterfaceHistory, p: ModeParams) -> ClosureResult:
    """Traditional partitioned closure: interface velocity from the solid,
    pressure from the Neumann problem, traction handed back to the solid."""
    v_I, _ = _solid_trace(lat, p)
    vdot = (1.5 * v_I - 2.0 * h.v_n + 0.5 * h.v_nm1) / p.dt
    p_I = p.rho * vdot * p.h_eff
    a1 = extrapolate_ghost(lat)
    b1 = -lat.b[2] - a1 - lat.a[2] - 4.0 * p_I
    return ClosureResult(v_I, p_I, b1, a1, v_I)


def atp_step(lat: SolidLattice, h: InterfaceHistory, p: ModeParams) -> ClosureResult:
    """Anti-traditional closure: traction from the solid, velocity from the
    trapezoidal update of the fluid momentum equation."""
    _, sigma_s = _solid_trace(lat, p)
    p_I = -sigma_s
    v_I = h.v_n + p.dt / (2.0 * p.rho * p.h_eff) * (p_I + h.p_n)
    a1 = extrapolate_ghost(lat)
    b1 = -lat.b[2] + a1 + lat.a[2] + 4.0 * p.zp * v_I
    return ClosureResult(v_I, p_I, b1, a1, v_I)


@dataclass
class IterateResult:
    v_I: complex
    p_I: complex
    b0: complex
    iterates: list
    ratios: list
    diverged: bool


def tp_iterate(lat: SolidLattice, h: InterfaceHistory, p: ModeParams,
               omega: float, max_iters: int = 100, tol: float = 1e-10) -> IterateResult:
    """Under-relaxed TP sub-iterations on the interface velocity.

    The contraction ratio of successive corrections is
    1 - omega*((3/2) M_eta + 1); divergence past 1e12 growth is reported,
    not raised, since the divergent regime is itself of interest.
    """
    if not 0.0 < omega <= 1.0:
        raise ValueError("omega must lie in (0, 1]")
    zp = p.zp
    heff = p.h_eff
    a0 = lat.a[1]
    b0 = lat.b[1]
    v = h.v_n   # iterate from the previous level's interface velocity
    iterates = [(v, h.p_n, b0)]
    ratios = []
    prev_err = None
    diverged = False
    e0 = None
    for _ in range(max_iters):
        v_new = (omega / (2.0 * zp)) * (b0 - a0) + (1.0 - omega) * v
        vdot = (1.5 * v_new - 2.0 * h.v_n + 0.5 * h.v_nm1) / p.dt
        p_new = p.rho * vdot * heff
        b0 = -a0 - 2.0 * p_new
        err = v_new - v
        if prev_err is not None and prev_err != 0:
            ratios.append(err / prev_err)
        prev_err = err
        if e0 is None:
            e0 = abs(err) if err != 0 else None
        v = v_new
        iterates.append((v, p_new, b0))
        if abs(err) <= tol:
            break
        if e0 is not None and abs(err) > 1e12 * e0:
            diverged = True
            break
    return IterateResult(v, iterates[-1][1], b0, iterates, ratios, diverged)


@dataclass
class AdvanceResult:
    lattice: SolidLattice
    history: InterfaceHistory
    growth: float
    residual: float
    status: str
    v_trace: np.ndarray
    p_trace: np.ndarray
    norms: np.ndarray


def _closure(scheme: Scheme, lat, h, p):
    if scheme.kind == "amp":
        return amp_step(lat, h, p, zf_model=scheme.zf_model)
    if scheme.kind == "tp":
        return tp_step(lat, h, p)
    if scheme.kind == "atp":
        return atp_step(lat, h, p)
    if scheme.kind == "tp-iter":
        it = tp_iterate(lat, h, p, scheme.omega, scheme.max_iters, scheme.tol)
        a1 = extrapolate_ghost(lat)
        # converged interface state closes the solid exactly like TP
        b1 = -lat.b[2] - a1 - lat.a[2] - 4.0 * it.p_I
        return ClosureResult(it.v_I, it.p_I, b1, a1, it.v_I)
    raise ValueError(scheme.kind)


def advance(scheme: Scheme, p: ModeParams, lat: SolidLattice,
            hist: InterfaceHistory = None, nsteps: int = 64,
            d_kind: str = "bdf") -> AdvanceResult:
    """March the coupled system nsteps, recording the interface trace.

    The growth estimate is exp(slope) from a least-squares line through
    log ||(a, b, d, v_I)|| over the last half of the run; the fit residual
    is reported alongside.  The run is clipped, and flagged unbounded, on
    overflow.
    """
    if nsteps < 16:
        raise ValueError("nsteps must be >= 16")
    lat = lat.copy()
    if hist is None:
        hist = InterfaceHistory.seeded(lat, p)
    window = (lat.depth - 4) / max(p.lambda_y, 1e-300)
    status = "ok" if nsteps <= window else "window"
    norms = []
    v_trace = []
    p_trace = []
    for _ in range(nsteps):
        a_new, b_new = lax_wendroff_step(lat, p)
        lat.a[1:-1] = a_new
        lat.b[1:-1] = b_new
        extrapolate_bottom(lat.a)
        extrapolate_bottom(lat.b)
        res = _closure(scheme, lat, hist, p)
        lat.a[0] = res.a1
        lat.b[0] = res.b1
        d_new = d_quadrature_step(lat, p, lat.a, lat.b, kind=d_kind)
        lat.d_prev = lat.d
        lat.d = d_new
        lat.level += 1
        hist.push(res.v_I, res.p_I, res.v_f)
        interior = slice(1, lat.depth + 1)
        with np.errstate(over="ignore", invalid="ignore"):
            norm = float(np.sqrt(
                np.sum(np.abs(lat.a[interior]) ** 2)
                + np.sum(np.abs(lat.b[interior]) ** 2)
                + np.sum(np.abs(lat.d[interior]) ** 2)
                + min(abs(res.v_I), 1e160) ** 2
            ))
        if not math.isfinite(norm) or norm > 1e150:
            status = "unbounded"
            break
        v_trace.append(res.v_I)
        p_trace.append(res.p_I)
        norms.append(norm)
    norms = np.array(norms)
    v_trace = np.array(v_trace)
    p_trace = np.array(p_trace)
    growth, resid = _fit_growth(norms)
    return AdvanceResult(lat, hist, growth, resid, status, v_trace, p_trace, norms)


def _fit_growth(norms):
    n = len(norms)
    if n < 4 or np.all(norms < 1e-280):
        return 1.0, 0.0
    start = n // 2
    window = norms[start:]
    if np.any(window <= 0):
        return 1.0, 0.0
    steps = np.arange(start, n, dtype=float)
    logs = np.log(window)
    coeffs, res, *_ = np.polyfit(steps, logs, 1, full=True)
    slope = coeffs[0]
    resid = math.sqrt(res[0] / len(window)) if len(res) else 0.0
    return math.exp(slope), resid


def exact_interface_1d(b_incoming, v0, p: ModeParams, t: float):
    """Exact 1D (kx = 0) interface velocity under a prescribed incoming
    characteristic history b_I(t), via

        v_I(t) = -(1/(rho H)) int_0^t exp(lam (tau - t)) b_I(tau) dtau
                 + v_I(0) exp(-lam t),      lam = zp/(rho H).

    Also returns the outgoing characteristic a_I = -rho H dv/dt + zp v_I,
    which equals b_I + 2 zp v_I on the solution.
    """
    if t < 0:
        raise ValueError("t must be nonnegative")
    rho_h = p.rho * p.H
    lam = p.zp / rho_h
    if t == 0:
        return complex(v0), complex(b_incoming(0.0) + 2.0 * p.zp * v0)

    def kernel_re(tau):
        return math.exp(lam * (tau - t)) * complex(b_incoming(tau)).real

    def kernel_im(tau):
        return math.exp(lam * (tau - t)) * complex(b_incoming(tau)).imag

    re, _ = quad(kernel_re, 0.0, t, epsabs=1e-12, epsrel=1e-11, limit=400)
    im, _ = quad(kernel_im, 0.0, t, epsabs=1e-12, epsrel=1e-11, limit=400)
    v = -(re + 1j * im) / rho_h + v0 * math.exp(-lam * t)
    a_out = b_incoming(t) + 2.0 * p.zp * v
    return v, a_out
