"""Normal-mode (GKS-style) stability analysis of the partitioned schemes.

For a normal mode a_j^n = A^n sum_k k_n q_n phi_n^j (and likewise b, d with
components r_n, s_n), the interior Lax-Wendroff/BDF discretization fixes the
spatial eigenvalues phi as roots of a quartic; the interface closure plus
ghost extrapolation assemble a 2x2 boundary matrix G whose singularity
det(G) = 0 selects admissible amplification factors A.  Weak stability means
no roots with |A| > 1.

Eigenvector convention: components (q, r, s) multiply the (a, b, d) fields,
so the pure-b family tends to (0, 1, 0) and the pure-a family to (1, 0, 0)
as lambda_x -> 0.  The boundary-matrix rows follow this convention
throughout (interchanging the roles of q and r gives an equivalent form of
the same matrix).

Root searches run directly on det(G) via argument-principle winding counts
over nested annuli in the A plane, followed by Newton polish; certification
is by the det(G) residual, which by construction rejects the spurious roots
a radical-cleared polynomial formulation would introduce.
"""

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .impedance import fluid_impedance_full, fluid_impedance_variational
from .numerics import IterationLimitError, find_root

__all__ = [
    "EliminationSingularityError",
    "EigvecConsistencyError",
    "RefinementFailureError",
    "NormalModeRoot",
    "RegionMap",
    "phi_roots",
    "branch_select_1d",
    "eigvec",
    "g_matrix",
    "det_g",
    "find_unstable_roots",
    "find_unstable_roots_1d",
    "continue_lambda_x",
    "stability_map",
    "cauchy_cfl_map",
    "amp_cfl_check",
    "tp_iteration_optimum",
    "iterations_needed",
    "fluid_impedance_full",
    "fluid_impedance_variational",
]

CERT_RESIDUAL = 1e-9
INNER_RADIUS = 1.0 + 1e-6


class EliminationSingularityError(ValueError):
    """The BDF elimination denominator 3A^2 - 4A + 1 vanished (A = 1 or 1/3)."""


class EigvecConsistencyError(RuntimeError):
    """The reduced block at phi was not singular to working precision."""


class RefinementFailureError(RuntimeError):
    """A winding count failed to settle to an integer under refinement."""


# ---------------------------------------------------------------------------
# interior symbol: quartic for phi and spatial eigenvectors
# ---------------------------------------------------------------------------

def _entry_triples(A, lx, ly):
    """Reduced 2x2 block entries as (1/phi, 1, phi) coefficient triples.

    The d component is eliminated through s = i lx A^2 (r - q)/(3A^2-4A+1);
    rows are the a- and b-equations of the one-step symbol.
    """
    A = np.asarray(A, dtype=complex)
    den = 3.0 * A * A - 4.0 * A + 1.0
    if np.any(np.abs(den) < 1e-12):
        raise EliminationSingularityError("A too close to 1 or 1/3")
    cs = 1j * lx * A * A / den
    one = np.ones_like(A)
    base = (1.0 - 0.25 * lx * lx) * one - A - ly * ly * one
    # U13/U23: source coupling of d into the a/b rows
    u13 = (-0.25j * lx * ly * one, -1j * lx * one, 0.25j * lx * ly * one)
    u23 = (-0.25j * lx * ly * one, 1j * lx * one, 0.25j * lx * ly * one)
    u11 = ((0.5 * ly + 0.5 * ly * ly) * one, base, (-0.5 * ly + 0.5 * ly * ly) * one)
    u22 = ((-0.5 * ly + 0.5 * ly * ly) * one, base, (0.5 * ly + 0.5 * ly * ly) * one)
    u12 = (np.zeros_like(A), 0.25 * lx * lx * one, np.zeros_like(A))
    b11 = tuple(u11[i] - cs * u13[i] for i in range(3))
    b12 = tuple(u12[i] + cs * u13[i] for i in range(3))
    b21 = tuple(u12[i] - cs * u23[i] for i in range(3))
    b22 = tuple(u22[i] + cs * u23[i] for i in range(3))
    return b11, b12, b21, b22, cs


def _conv3(x, y):
    # product of two (c0 + c1 phi + c2 phi^2) polynomials, ascending coeffs
    return (
        x[0] * y[0],
        x[0] * y[1] + x[1] * y[0],
        x[0] * y[2] + x[1] * y[1] + x[2] * y[0],
        x[1] * y[2] + x[2] * y[1],
        x[2] * y[2],
    )


def _quartic_coeffs(A, lx, ly):
    """Ascending coefficients of the degree-4 phi polynomial det(phi B) = 0."""
    b11, b12, b21, b22, _ = _entry_triples(A, lx, ly)
    c1 = _conv3(b11, b22)
    c2 = _conv3(b12, b21)
    return tuple(c1[k] - c2[k] for k in range(5))


def _quad_roots_vec(c2, c1, c0):
    """Stable vectorized quadratic solve; degenerate leading coeffs give one
    root pushed to a large modulus placeholder."""
    c2 = np.asarray(c2, dtype=complex)
    disc = np.sqrt(c1 * c1 - 4.0 * c2 * c0)
    flip = np.real(np.conj(c1) * disc) < 0
    disc = np.where(flip, -disc, disc)
    qq = -0.5 * (c1 + disc)
    with np.errstate(divide="ignore", invalid="ignore"):
        r1 = np.where(np.abs(c2) > 0, qq / np.where(c2 == 0, 1, c2), np.inf)
        r2 = np.where(np.abs(qq) > 0, c0 / np.where(qq == 0, 1, qq), 0.0)
    return r1, r2


def _phi_roots_1d_vec(A, ly):
    """phi roots at lambda_x = 0: the a- and b-family quadratics."""
    A = np.asarray(A, dtype=complex)
    one = np.ones_like(A)
    half = 0.5 * (ly * ly + ly)
    halfm = 0.5 * (ly * ly - ly)
    mid = 1.0 - ly * ly - A
    b1, b2 = _quad_roots_vec(half * one, mid, halfm * one)   # b family
    a1, a2 = _quad_roots_vec(halfm * one, mid, half * one)   # a family
    return np.stack([b1, b2, a1, a2], axis=-1)


def _phi_roots_vec(A, lx, ly):
    """All four phi roots for each A, sorted by descending modulus."""
    A = np.asarray(A, dtype=complex)
    if lx == 0.0:
        roots = _phi_roots_1d_vec(A, ly)
    else:
        coeffs = _quartic_coeffs(A, lx, ly)
        c = np.stack(coeffs, axis=-1)
        lead = c[..., 4]
        scale = np.max(np.abs(c), axis=-1)
        bad = np.abs(lead) < 1e-14 * scale
        if np.any(bad):
            # nudge the degenerate leading coefficient; roots near infinity
            lead = np.where(bad, 1e-14 * scale, lead)
            c = c.copy()
            c[..., 4] = lead
        comp = np.zeros(A.shape + (4, 4), dtype=complex)
        comp[..., 1, 0] = 1.0
        comp[..., 2, 1] = 1.0
        comp[..., 3, 2] = 1.0
        for k in range(4):
            comp[..., k, 3] = -c[..., k] / lead
        roots = np.linalg.eigvals(comp)
    order = np.argsort(-np.abs(roots), axis=-1, kind="stable")
    return np.take_along_axis(roots, order, axis=-1)


def phi_roots(A, lambda_x, lambda_y, assert_split: bool = False):
    """Spatial eigenvalues phi for one amplification factor, descending |phi|.

    With |A| > 1 inside the Cauchy-stable region exactly two roots lie
    outside the unit circle and two inside; assert_split enforces this.
    """
    if lambda_y <= 0:
        raise ValueError("lambda_y must be positive")
    roots = _phi_roots_vec(np.array([A], dtype=complex), lambda_x, lambda_y)[0]
    if assert_split:
        mods = np.abs(roots)
        if not (mods[0] > 1 and mods[1] > 1 and mods[2] < 1 and mods[3] < 1):
            raise RefinementFailureError(
                f"root modulus split violated: |phi| = {np.sort(mods)[::-1]}"
            )
    return roots


def branch_select_1d(A, lambda_y):
    """Closed-form 1D eigenvalue pair with |phi| > 1, branch chosen across
    the cut Re(A) = 1 - lambda_y^2 (sign of Im(A) decides on the line)."""
    A = complex(A)
    ly = float(lambda_y)
    if abs(A) <= 1.0:
        raise ValueError("the 1D branch selection is only valid for |A| > 1")
    if not 0.0 < ly <= 1.0:
        raise ValueError("lambda_y must lie in (0, 1]")
    cut = 1.0 - ly * ly
    if A.real > cut:
        sign = 1.0
    elif A.real < cut:
        sign = -1.0
    else:
        sign = 1.0 if A.imag > 0 else -1.0
    disc = cmath.sqrt(A * A - (2.0 * A - 1.0) * (1.0 - ly * ly))
    phi1 = (ly * ly + A - 1.0 + sign * disc) / (ly * (ly - 1.0))
    phi2 = (ly - 1.0) / (ly + 1.0) * phi1
    return phi1, phi2


def eigvec(phi, A, lambda_x, lambda_y, check: bool = True):
    """Null direction (q, r, s) of the interior symbol at a certified phi.

    Normalized so that the dominant of (q, r) is one; the limits at
    lambda_x -> 0 are (0, 1, 0) for the b family and (1, 0, 0) for the a
    family.  s follows from the eliminated d row.
    """
    b11, b12, b21, b22, cs = _entry_triples(np.array([A], dtype=complex),
                                            lambda_x, lambda_y)
    phi = complex(phi)

    def val(t):
        return complex(t[0][0] / phi + t[1][0] + t[2][0] * phi)

    v11, v12, v21, v22 = val(b11), val(b12), val(b21), val(b22)
    cand1 = np.array([v12, -v11])
    cand2 = np.array([v22, -v21])
    cand = cand1 if np.linalg.norm(cand1) >= np.linalg.norm(cand2) else cand2
    norm = np.linalg.norm(cand)
    if norm == 0:
        raise EigvecConsistencyError("reduced block vanished identically")
    q, r = cand / cand[np.argmax(np.abs(cand))]
    s = complex(cs[0]) * (r - q)
    if check:
        scale = max(abs(v11), abs(v12), abs(v21), abs(v22), 1e-300)
        res = max(abs(v11 * q + v12 * r), abs(v21 * q + v22 * r))
        if res > 1e-8 * scale * max(abs(q), abs(r)):
            raise EigvecConsistencyError(
                f"block residual {res:.2e} vs scale {scale:.2e}; phi not a root?"
            )
    return complex(q), complex(r), complex(s)


# ---------------------------------------------------------------------------
# boundary matrix and determinant
# ---------------------------------------------------------------------------

def _scheme_row_entry(kind, A, phi, q, r, m):
    """Coefficient of k_n in the scheme's incoming-characteristic closure."""
    ph = phi + 1.0 / phi
    if kind == "tp":
        return (q + r) * ph + m * (3.0 * A * A - 4.0 * A + 1.0) / (A * A) * (r - q)
    if kind == "atp":
        return (r - q) * ph + (A + 1.0) / (m * (A - 1.0)) * (r + q)
    if kind == "amp":
        k3 = A * A - (4.0 / 3.0) * A + 1.0 / 3.0
        beta0 = A * A * (r - q - r * ph)
        beta1 = (-A * A * (r / 6.0 - 5.0 * q / 6.0 + r * ph)
                 + 2.0 * A * (r - q) + 0.5 * (q - r))
        beta2 = k3 * (q + r - r * ph)
        denom = k3 * m * m + A * A * m + A * A
        return (beta2 * m * m + beta1 * m + beta0) / denom
    raise ValueError(f"unknown scheme kind {kind!r}")


def g_matrix(kind, A, phi1, phi2, vec1, vec2, M, eta=1.0):
    """2x2 boundary matrix; row 1 is the interface scheme applied to each
    spatial mode, row 2 the ghost extrapolation of the outgoing field.
    The mass ratio enters only through M_eff = M * eta."""
    m = M * eta
    q1, r1, _ = vec1
    q2, r2, _ = vec2
    g = np.empty((2, 2), dtype=complex)
    g[0, 0] = _scheme_row_entry(kind, A, phi1, q1, r1, m)
    g[0, 1] = _scheme_row_entry(kind, A, phi2, q2, r2, m)
    g[1, 0] = q1 * (phi1 - 2.0 + 1.0 / phi1)
    g[1, 1] = q2 * (phi2 - 2.0 + 1.0 / phi2)
    return g


def _det_g_batch(kind, A, lx, ly, m):
    """Vectorized det(G) and the swap-invariant contour function
    det(G)/(phi1 - phi2), plus the Hadamard row scale for certification."""
    A = np.asarray(A, dtype=complex)
    roots = _phi_roots_vec(A, lx, ly)
    phi = roots[..., :2]
    b11, b12, b21, b22, cs = _entry_triples(A, lx, ly)

    def val(t, ph):
        return t[0][..., None] / ph + t[1][..., None] + t[2][..., None] * ph

    v11 = val(b11, phi)
    v12 = val(b12, phi)
    v21 = val(b21, phi)
    v22 = val(b22, phi)
    c1 = np.stack([v12, -v11], axis=-1)
    c2 = np.stack([v22, -v21], axis=-1)
    n1 = np.linalg.norm(c1, axis=-1)
    n2 = np.linalg.norm(c2, axis=-1)
    cand = np.where((n1 >= n2)[..., None], c1, c2)
    dom = np.take_along_axis(cand, np.argmax(np.abs(cand), axis=-1)[..., None],
                             axis=-1)
    with np.errstate(invalid="ignore", divide="ignore"):
        cand = cand / np.where(dom == 0, 1.0, dom)
    q = cand[..., 0]
    r = cand[..., 1]
    ph_sum = phi + 1.0 / phi
    Ae = A[..., None]
    me = m
    if kind == "tp":
        row1 = (q + r) * ph_sum + me * (3 * Ae * Ae - 4 * Ae + 1) / (Ae * Ae) * (r - q)
    elif kind == "atp":
        row1 = (r - q) * ph_sum + (Ae + 1.0) / (me * (Ae - 1.0)) * (r + q)
    elif kind == "amp":
        k3 = Ae * Ae - (4.0 / 3.0) * Ae + 1.0 / 3.0
        beta0 = Ae * Ae * (r - q - r * ph_sum)
        beta1 = (-Ae * Ae * (r / 6.0 - 5.0 * q / 6.0 + r * ph_sum)
                 + 2.0 * Ae * (r - q) + 0.5 * (q - r))
        beta2 = k3 * (q + r - r * ph_sum)
        row1 = (beta2 * me * me + beta1 * me + beta0) / (k3 * me * me + Ae * Ae * me + Ae * Ae)
    else:
        raise ValueError(f"unknown scheme kind {kind!r}")
    row2 = q * (phi - 2.0 + 1.0 / phi)
    det = row1[..., 0] * row2[..., 1] - row1[..., 1] * row2[..., 0]
    scale = (np.maximum(np.abs(row1[..., 0]), np.abs(row1[..., 1]))
             * np.maximum(np.abs(row2[..., 0]), np.abs(row2[..., 1])))
    fcont = det / (phi[..., 0] - phi[..., 1])
    return det, fcont, scale


def det_g(kind, A, lambda_x, lambda_y, M, eta=1.0):
    """Residual det(G) at one amplification factor (|A| > 1 expected)."""
    det, _, _ = _det_g_batch(kind, np.array([A], dtype=complex), lambda_x,
                             lambda_y, M * eta)
    return complex(det[0])


def _det_g_relative(kind, A, lx, ly, m):
    det, _, scale = _det_g_batch(kind, np.array([A], dtype=complex), lx, ly, m)
    return abs(det[0]) / max(1.0, float(scale[0]))


# ---------------------------------------------------------------------------
# argument-principle root search
# ---------------------------------------------------------------------------

def _winding_on_circle(kind, lx, ly, m, radius, n0=128, nmax=16384):
    """Winding number of det(G)/(phi1 - phi2) around |A| = radius."""
    n = n0
    while True:
        theta = np.linspace(0.0, 2.0 * math.pi, n, endpoint=False)
        A = radius * np.exp(1j * theta)
        _, f, _ = _det_g_batch(kind, A, lx, ly, m)
        if np.any(~np.isfinite(f)) or np.any(np.abs(f) == 0.0):
            raise RefinementFailureError("contour hit a non-finite value")
        fn = np.concatenate([f, f[:1]])
        dphi = np.angle(fn[1:] / fn[:-1])
        if np.max(np.abs(dphi)) < 0.5 * math.pi:
            total = float(np.sum(dphi)) / (2.0 * math.pi)
            w = round(total)
            if abs(total - w) > 0.1:
                raise RefinementFailureError(
                    f"non-integer winding {total:.3f} on |A| = {radius}")
            return w
        n *= 2
        if n > nmax:
            raise RefinementFailureError(
                f"winding did not settle on |A| = {radius} (n > {nmax})")


def _winding_robust(kind, lx, ly, m, radius):
    # a root sitting on the contour makes refinement fail; retry nudged radii
    for bump in (0.0, 3e-4, -3e-4, 1.1e-3):
        try:
            return _winding_on_circle(kind, lx, ly, m, radius * (1.0 + bump)), \
                radius * (1.0 + bump)
        except RefinementFailureError:
            continue
    raise RefinementFailureError(f"winding failed near |A| = {radius}")


def _default_a_max(kind, ly, m):
    if kind == "tp":
        return max(10.0, 4.0 * m * (1.0 + ly))
    if kind == "atp":
        return max(10.0, 2.0 * ly * (1.0 + ly) / m + 10.0)
    return 10.0


def _polish(kind, lx, ly, m, seed, tol=1e-13):
    def f(z):
        _, fc, _ = _det_g_batch(kind, np.array([z]), lx, ly, m)
        return complex(fc[0])

    return find_root(f, seed, tol=tol * max(1.0, abs(f(seed))), max_iter=60)


def _certify(kind, lx, ly, m, A):
    det, _, scale = _det_g_batch(kind, np.array([A]), lx, ly, m)
    resid = abs(complex(det[0]))
    rel = resid / max(1.0, float(scale[0]))
    return resid, rel


@dataclass(frozen=True)
class NormalModeRoot:
    """A certified unstable normal mode."""

    A: complex
    phi1: complex
    phi2: complex
    eigvec1: tuple
    eigvec2: tuple
    residual: float
    residual_rel: float = 0.0


def _extract_roots(kind, lx, ly, m, r_in, r_out, count, depth=0):
    """Newton from a seed lattice inside the annulus; recursive radial split
    if seeds miss some of the counted roots."""
    found = []
    n_rad = 6 + 2 * depth
    n_ang = 24 + 8 * depth
    radii = np.geomspace(max(r_in, INNER_RADIUS), r_out, n_rad)
    for rad in radii:
        for th in np.linspace(0, 2 * math.pi, n_ang, endpoint=False):
            seed = rad * cmath.exp(1j * th)
            try:
                z = _polish(kind, lx, ly, m, seed)
            except (IterationLimitError, RefinementFailureError,
                    EliminationSingularityError):
                continue
            if not (r_in * 0.999 <= abs(z) <= r_out * 1.001):
                continue
            if abs(z) <= INNER_RADIUS:
                continue
            if any(abs(z - w) <= 1e-7 * (1 + abs(w)) for w in found):
                continue
            _, rel = _certify(kind, lx, ly, m, z)
            if rel <= CERT_RESIDUAL:
                found.append(z)
            if len(found) >= count:
                return found
    if len(found) < count and depth < 3:
        mid = math.sqrt(r_in * r_out)
        try:
            w_mid, rm = _winding_robust(kind, lx, ly, m, mid)
            w_in, _ = _winding_robust(kind, lx, ly, m, r_in)
            inner_count = w_mid - w_in
        except RefinementFailureError:
            return found
        lower = _extract_roots(kind, lx, ly, m, r_in, rm, inner_count, depth + 1)
        upper = _extract_roots(kind, lx, ly, m, rm, r_out, count - inner_count,
                               depth + 1)
        merged = list(lower)
        for z in upper:
            if not any(abs(z - w) <= 1e-7 * (1 + abs(w)) for w in merged):
                merged.append(z)
        return merged
    return found


def find_unstable_roots(kind, lambda_y, m_eta, lambda_x=0.0, a_max=None):
    """All certified roots of det(G) with |A| in (1 + 1e-6, a_max).

    Argument-principle counting over nested annuli locates the roots; each
    is Newton-polished and kept only when the det(G) residual passes the
    certification filter.  An empty list certifies weak stability at these
    parameters (to the sampled tolerance).
    """
    if a_max is None:
        a_max = _default_a_max(kind, lambda_y, m_eta)
    radii = [INNER_RADIUS]
    r = 2.0
    while r < a_max:
        radii.append(r)
        r *= 2.0
    radii.append(a_max)
    windings = {}
    for rad in radii:
        w, r_used = _winding_robust(kind, lambda_x, lambda_y, m_eta, rad)
        windings[rad] = (w, r_used)
    roots = []
    for r_in, r_out in zip(radii[:-1], radii[1:]):
        count = windings[r_out][0] - windings[r_in][0]
        if count <= 0:
            continue
        zs = _extract_roots(kind, lambda_x, lambda_y, m_eta,
                            windings[r_in][1], windings[r_out][1], count)
        roots.extend(zs)
    out = []
    for z in sorted(set(roots), key=lambda w: (-abs(w), w.real, w.imag)):
        if any(abs(z - r0.A) <= 1e-7 * (1 + abs(z)) for r0 in out):
            continue
        phis = phi_roots(z, lambda_x, lambda_y)
        v1 = eigvec(phis[0], z, lambda_x, lambda_y)
        v2 = eigvec(phis[1], z, lambda_x, lambda_y)
        resid, rel = _certify(kind, lambda_x, lambda_y, m_eta, z)
        out.append(NormalModeRoot(z, phis[0], phis[1], v1, v2, resid, rel))
    return out


def find_unstable_roots_1d(kind, lambda_y, mgrid, a_max=None):
    """1D search (lambda_x = 0, eta = 1) parametrized by the grid mass ratio."""
    if not 0.0 < lambda_y <= 1.0:
        raise ValueError("lambda_y must lie in (0, 1]")
    if mgrid <= 0:
        raise ValueError("mgrid must be positive")
    ly = min(lambda_y, 1.0 - 1e-9)   # the exact shift limit degenerates
    m = mgrid / ly
    return find_unstable_roots(kind, ly, m, lambda_x=0.0, a_max=a_max)


@dataclass
class ContinuationPath:
    lambda_x: np.ndarray
    A: np.ndarray
    residuals: np.ndarray
    failure_index: int = -1   # -1 means the full path converged


def continue_lambda_x(root, kind, lambda_y, m_eta, lambda_x_target, N):
    """Follow a 1D root into lambda_x > 0 along (lambda_x)_k = sqrt(k d),
    d = lambda_x_target^2 / N, Newton-seeding each step with the previous."""
    A0 = root.A if isinstance(root, NormalModeRoot) else complex(root)
    if N < 1 or lambda_x_target < 0:
        raise ValueError("need N >= 1 and lambda_x_target >= 0")
    if lambda_x_target == 0.0:
        return ContinuationPath(np.array([0.0]), np.array([A0]),
                                np.array([abs(det_g(kind, A0, 0.0, lambda_y,
                                                    m_eta))]))
    d = lambda_x_target**2 / N
    lxs = [0.0]
    As = [A0]
    res = [abs(det_g(kind, A0, 0.0, lambda_y, m_eta))]
    fail = -1
    for k in range(1, N + 1):
        lx = math.sqrt(k * d)
        try:
            z = _polish(kind, lx, lambda_y, m_eta, As[-1])
        except (IterationLimitError, EliminationSingularityError):
            fail = k
            break
        lxs.append(lx)
        As.append(z)
        res.append(abs(det_g(kind, z, lx, lambda_y, m_eta)))
    return ContinuationPath(np.array(lxs), np.array(As), np.array(res), fail)


# ---------------------------------------------------------------------------
# region sweeps
# ---------------------------------------------------------------------------

@dataclass
class RegionMap:
    axis1_name: str
    axis1: np.ndarray
    axis2_name: str
    axis2: np.ndarray
    values: np.ndarray          # shape (len(axis1), len(axis2))
    nroots: np.ndarray = None
    status: np.ndarray = None   # 'ok' or 'failed' per cell

    @property
    def failed_fraction(self):
        if self.status is None:
            return 0.0
        return float(np.mean(self.status == "failed"))


def _map_cell(args):
    kind, ly, mg, a_max = args
    try:
        roots = find_unstable_roots_1d(kind, ly, mg, a_max=a_max)
        max_a = max((abs(r.A) for r in roots), default=1.0)
        return max_a, len(roots), "ok"
    except Exception:
        return math.nan, 0, "failed"


def stability_map(kind, lambda_y_grid, mgrid_grid, a_max=None, workers=None):
    """max |A| over certified roots per (lambda_y, mgrid) cell (1.0 if none).

    Cells sweep in parallel; per-cell failures are recorded, not fatal.
    """
    lys = np.asarray(lambda_y_grid, dtype=float)
    mgs = np.asarray(mgrid_grid, dtype=float)
    tasks = [(kind, ly, mg, a_max) for ly in lys for mg in mgs]
    results = _run_parallel(_map_cell, tasks, workers)
    values = np.empty((len(lys), len(mgs)))
    nroots = np.empty((len(lys), len(mgs)), dtype=int)
    status = np.empty((len(lys), len(mgs)), dtype=object)
    for idx, (max_a, n, st) in enumerate(results):
        i, j = divmod(idx, len(mgs))
        values[i, j] = max_a
        nroots[i, j] = n
        status[i, j] = st
    return RegionMap("lambda_y", lys, "mgrid", mgs, values, nroots, status)


def _run_parallel(fn, tasks, workers):
    if workers is None:
        import os

        workers = min(os.cpu_count() or 1, len(tasks))
    if workers <= 1 or len(tasks) < 4:
        return [fn(t) for t in tasks]
    from concurrent.futures import ProcessPoolExecutor

    chunk = max(1, len(tasks) // (workers * 8))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, tasks, chunksize=chunk))


def _cauchy_symbol_matrix(A, lx, ly, phi):
    """Full 3x3 one-step symbol at phi on the unit circle, batched over A/phi."""
    A = np.asarray(A, dtype=complex)
    one = np.ones_like(A)
    dz0 = phi - 1.0 / phi
    dzpm = phi - 2.0 + 1.0 / phi
    T = np.zeros(A.shape + (3, 3), dtype=complex)
    base = (1.0 - 0.25 * lx * lx) * one - A + (-0.5 * ly * dz0 + 0.5 * ly * ly * dzpm)
    base_b = (1.0 - 0.25 * lx * lx) * one - A + (0.5 * ly * dz0 + 0.5 * ly * ly * dzpm)
    T[..., 0, 0] = base
    T[..., 0, 1] = 0.25 * lx * lx * one
    T[..., 0, 2] = -1j * lx + 0.25j * lx * ly * dz0
    T[..., 1, 0] = 0.25 * lx * lx * one
    T[..., 1, 1] = base_b
    T[..., 1, 2] = 1j * lx + 0.25j * lx * ly * dz0
    T[..., 2, 0] = 1j * lx / 3.0 * A * A
    T[..., 2, 1] = -1j * lx / 3.0 * A * A
    T[..., 2, 2] = A * A - (4.0 / 3.0) * A + 1.0 / 3.0
    return T


def _cluster_max_abs(roots, delta=1e-3):
    # replace root clusters by their centroid: first-order coefficient noise
    # cancels in the mean, so multiple roots (e.g. the triple A = 1 of the
    # symbol at omega = 0) stop leaking spuriously outside the unit circle
    roots = list(roots)
    used = [False] * len(roots)
    best = 0.0
    for i, z in enumerate(roots):
        if used[i]:
            continue
        members = [z]
        used[i] = True
        for j in range(i + 1, len(roots)):
            if not used[j] and abs(roots[j] - z) <= delta * max(1.0, abs(z)):
                members.append(roots[j])
                used[j] = True
        best = max(best, abs(sum(members) / len(members)))
    return best


def max_amp_cauchy(lambda_x, lambda_y, n_omega=256):
    """Maximum |A| of the interior (Cauchy) scheme over phi = e^{i omega}.

    The determinant in A (degree <= 6; degree 4 after the A-normalization of
    the first two symbol rows) is recovered by interpolation at seven
    Chebyshev samples and solved per omega sample.
    """
    omega = np.linspace(0.0, 2.0 * math.pi, n_omega, endpoint=False)
    phi = np.exp(1j * omega)
    nodes = 2.0 * np.cos(np.pi * (2 * np.arange(7) + 1) / 14.0) + 0.1j
    vander = np.vander(nodes, 7, increasing=True)
    dets = np.empty((7, n_omega), dtype=complex)
    for i, An in enumerate(nodes):
        T = _cauchy_symbol_matrix(np.full(n_omega, An), lambda_x, lambda_y, phi)
        dets[i] = np.linalg.det(T)
    coeffs = np.linalg.solve(vander, dets)    # ascending in A, per omega
    best = 0.0
    for j in range(n_omega):
        c = coeffs[:, j]
        cmax = np.max(np.abs(c))
        if cmax == 0.0:
            continue
        deg = 6
        while deg > 0 and abs(c[deg]) < 1e-10 * cmax:
            deg -= 1
        if deg == 0:
            continue
        roots = np.roots(c[: deg + 1][::-1])
        best = max(best, _cluster_max_abs(roots))
    return best


def cauchy_cfl_map(lambda_x_grid, lambda_y_grid, n_omega=256):
    """Interior-scheme amplification map over the (lambda_x, lambda_y) plane."""
    lxs = np.asarray(lambda_x_grid, dtype=float)
    lys = np.asarray(lambda_y_grid, dtype=float)
    values = np.empty((len(lxs), len(lys)))
    for i, lx in enumerate(lxs):
        for j, ly in enumerate(lys):
            if ly == 0.0 and lx == 0.0:
                values[i, j] = 1.0
                continue
            values[i, j] = max_amp_cauchy(lx, max(ly, 1e-12), n_omega)
    return RegionMap("lambda_x", lxs, "lambda_y", lys, values)


def _cfl_cell(args):
    lx, ly, m_samples = args
    worst = 1.0
    try:
        for m in m_samples:
            roots = find_unstable_roots("amp", ly, m, lambda_x=lx)
            for r in roots:
                worst = max(worst, abs(r.A))
        return worst, "ok"
    except Exception:
        return math.nan, "failed"


def amp_cfl_check(lambda_x, lambda_y, m_eta_samples=None):
    """Worst AMP amplification at one (lambda_x, lambda_y) over mass ratios.

    Returns 1.0 when no unstable normal mode is certified for any sampled
    M*eta (weak stability).
    """
    if m_eta_samples is None:
        m_eta_samples = np.geomspace(1e-6, 1e6, 25)
    ly = min(max(lambda_y, 1e-9), 1.0 - 1e-9)
    worst, status = _cfl_cell((lambda_x, ly, np.asarray(m_eta_samples)))
    if status != "ok":
        raise RefinementFailureError(
            f"amp cfl check failed at ({lambda_x}, {lambda_y})")
    return worst


def amp_cfl_scan(points, m_eta_samples=None, workers=None):
    """amp_cfl_check over many (lambda_x, lambda_y) points in parallel;
    returns the array of worst |A| values (nan where a cell failed)."""
    if m_eta_samples is None:
        m_eta_samples = np.geomspace(1e-6, 1e6, 25)
    m_eta_samples = np.asarray(m_eta_samples)
    tasks = [(lx, min(max(ly, 1e-9), 1.0 - 1e-9), m_eta_samples)
             for lx, ly in points]
    results = _run_parallel(_cfl_cell, tasks, workers)
    return np.array([w if st == "ok" else math.nan for w, st in results])


# ---------------------------------------------------------------------------
# TP iteration analysis
# ---------------------------------------------------------------------------

def tp_iteration_optimum(M0):
    """Optimal under-relaxation and its contraction: omega* = 4/(3 M0 + 4),
    A* = 3 M0/(3 M0 + 4); the minimax of |1 - omega((3/2) M0 eta + 1)| over
    eta in [0, 1]."""
    if M0 < 0:
        raise ValueError("M0 must be nonnegative")
    return 4.0 / (3.0 * M0 + 4.0), 3.0 * M0 / (3.0 * M0 + 4.0)


def iterations_needed(M0, tau):
    """Smallest k with (A*)^k < tau; ~ (3/4) M0 ln(1/tau) for M0 >> 1."""
    if not 0.0 < tau < 1.0:
        raise ValueError("tau must lie in (0, 1)")
    if M0 < 0:
        raise ValueError("M0 must be nonnegative")
    _, a_star = tp_iteration_optimum(M0)
    if a_star == 0.0:
        return 1
    k = math.log(tau) / math.log(a_star)
    n = max(1, math.floor(k) + 1)
    while a_star**n >= tau:
        n += 1
    return n
