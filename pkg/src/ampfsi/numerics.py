"""Scalar and small-dense numerical kernels: polynomial and nonlinear root
finding plus null vectors of nearly singular matrices.

All routines are pure and reentrant.
"""

import cmath

import numpy as np

__all__ = [
    "BracketError",
    "IterationLimitError",
    "RankError",
    "bisect",
    "find_root",
    "null_vector",
    "poly_roots",
]


class IterationLimitError(RuntimeError):
    """Newton failed to converge; carries the last iterate and residual."""

    def __init__(self, message, last, residual):
        super().__init__(f"{message} (last iterate {last}, |f| = {abs(residual):.3e})")
        self.last = last
        self.residual = residual


class BracketError(ValueError):
    """Bisection endpoints do not bracket a sign change."""


class RankError(ValueError):
    """Matrix is not singular enough for a trustworthy null vector."""


def _polyval(coeffs, z):
    # Horner, ascending coefficients
    acc = 0.0 + 0.0j
    for c in reversed(coeffs):
        acc = acc * z + c
    return acc


def _polyder(coeffs):
    return [k * coeffs[k] for k in range(1, len(coeffs))]


def poly_roots(coeffs, tol_scale: float = 1e-10):
    """All roots of a polynomial with complex coefficients.

    Parameters
    ----------
    coeffs : sequence of complex
        Ascending-degree coefficients; the leading (last) one must be nonzero.

    Returns
    -------
    ndarray of complex roots, each with residual
    |p(root)| <= tol_scale * max|coeff| * max(1, |root|)**degree.

    Simultaneous Aberth iteration with a companion-matrix fallback.
    """
    coeffs = [complex(c) for c in coeffs]
    if len(coeffs) < 2 or all(c == 0 for c in coeffs):
        raise ValueError("need a polynomial of degree >= 1")
    if coeffs[-1] == 0:
        raise ValueError("leading coefficient must be nonzero")
    degree = len(coeffs) - 1
    scale = max(abs(c) for c in coeffs)
    monic = [c / coeffs[-1] for c in coeffs]
    dcoeffs = _polyder(monic)

    # Cauchy-style bound for the initial circle
    radius = 1.0 + max(abs(c) for c in monic[:-1])
    z = np.array(
        [
            radius * cmath.exp(2j * cmath.pi * (k + 0.37) / degree)
            for k in range(degree)
        ]
    )
    converged = False
    for _ in range(100):
        moved = 0.0
        for i in range(degree):
            p = _polyval(monic, z[i])
            dp = _polyval(dcoeffs, z[i])
            if p == 0:
                continue
            if dp == 0:
                z[i] += 1e-6 * (1 + abs(z[i]))
                continue
            ratio = p / dp
            rep = sum(1.0 / (z[i] - z[j]) for j in range(degree) if j != i)
            denom = 1.0 - ratio * rep
            step = ratio / denom if denom != 0 else ratio
            z[i] -= step
            moved = max(moved, abs(step) / max(1.0, abs(z[i])))
        if moved < 1e-15:
            converged = True
            break
    if not converged or not _roots_ok(coeffs, z, scale, degree, tol_scale):
        z = np.roots(list(reversed(coeffs)))
        # polish with a couple of Newton steps on the monic form
        for _ in range(3):
            p = np.array([_polyval(monic, w) for w in z])
            dp = np.array([_polyval(dcoeffs, w) for w in z])
            mask = dp != 0
            z[mask] = z[mask] - p[mask] / dp[mask]
    if not _roots_ok(coeffs, z, scale, degree, tol_scale):
        raise IterationLimitError("polynomial root residuals too large", z, max(
            abs(_polyval(coeffs, w)) for w in z))
    return z


def _roots_ok(coeffs, roots, scale, degree, tol_scale):
    for w in roots:
        bound = tol_scale * scale * max(1.0, abs(w)) ** degree
        if abs(_polyval(coeffs, w)) > bound:
            return False
    return True


def find_root(f, seed, tol: float = 1e-12, max_iter: int = 100):
    """Newton iteration on an analytic f with central finite-difference slope.

    Returns z with |f(z)| <= tol; raises IterationLimitError otherwise.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    z = complex(seed)
    fz = f(z)
    for _ in range(max_iter):
        if abs(fz) <= tol:
            return z
        h = 1e-7 * max(1.0, abs(z))
        df = (f(z + h) - f(z - h)) / (2.0 * h)
        if df == 0:
            z += h
            fz = f(z)
            continue
        step = fz / df
        # damped backtracking keeps wild steps from escaping the basin
        for _ in range(30):
            trial = z - step
            ftrial = f(trial)
            if abs(ftrial) < abs(fz) or abs(ftrial) <= tol:
                z, fz = trial, ftrial
                break
            step *= 0.5
        else:
            break
    if abs(fz) <= tol:
        return z
    raise IterationLimitError("Newton did not converge", z, fz)


def bisect(f, lo: float, hi: float, tol: float = 1e-12, max_iter: int = 200):
    """Bisection on a real function with a sign change on [lo, hi]."""
    flo = f(lo)
    fhi = f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if flo * fhi > 0:
        raise BracketError(f"no sign change: f({lo}) = {flo:.3g}, f({hi}) = {fhi:.3g}")
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if hi - lo <= tol:
            return mid
        fmid = f(mid)
        if fmid == 0.0:
            return mid
        if flo * fmid < 0:
            hi = mid
        else:
            lo, flo = mid, fmid
    return 0.5 * (lo + hi)


def null_vector(m, residual_floor: float = 1e-8, separation: float = 10.0):
    """Unit-norm null vector of a numerically singular square matrix.

    Gaussian elimination with full pivoting; the free variable at the final
    (smallest) pivot position is set to one and back-substituted.  Raises
    RankError when the smallest pivot is not well separated from the next
    one or the residual |m v| exceeds residual_floor * ||m||.
    """
    a = np.array(m, dtype=complex)
    n = a.shape[0]
    if a.shape != (n, n) or n > 8:
        raise ValueError("expected a square matrix of size <= 8")
    norm = np.linalg.norm(a)
    if norm == 0:
        v = np.zeros(n)
        v[0] = 1.0
        return v.astype(complex)
    row_perm = list(range(n))
    col_perm = list(range(n))
    u = a.copy()
    pivots = []
    for k in range(n - 1):
        sub = np.abs(u[k:, k:])
        i, j = np.unravel_index(np.argmax(sub), sub.shape)
        i += k
        j += k
        u[[k, i], :] = u[[i, k], :]
        row_perm[k], row_perm[i] = row_perm[i], row_perm[k]
        u[:, [k, j]] = u[:, [j, k]]
        col_perm[k], col_perm[j] = col_perm[j], col_perm[k]
        piv = u[k, k]
        pivots.append(abs(piv))
        if piv == 0:
            break
        factors = u[k + 1 :, k] / piv
        u[k + 1 :, k:] -= np.outer(factors, u[k, k:])
    pivots.append(abs(u[n - 1, n - 1]))
    smallest = pivots[-1]
    second = min(pivots[:-1]) if n > 1 else np.inf
    if smallest > 0 and second / max(smallest, 1e-300) < separation:
        raise RankError(
            f"pivot separation {second / max(smallest, 1e-300):.2g} < {separation}; "
            "matrix is not numerically singular"
        )
    # free variable = 1 at the last permuted column, back-substitute the rest
    y = np.zeros(n, dtype=complex)
    y[n - 1] = 1.0
    for k in range(n - 2, -1, -1):
        y[k] = -(u[k, k + 1 :] @ y[k + 1 :]) / u[k, k]
    v = np.zeros(n, dtype=complex)
    for k in range(n):
        v[col_perm[k]] = y[k]
    v /= np.linalg.norm(v)
    resid = np.linalg.norm(a @ v)
    if resid > residual_floor * norm:
        raise RankError(
            f"null-vector residual {resid:.2e} exceeds {residual_floor:.1e} * ||m||"
        )
    return v
