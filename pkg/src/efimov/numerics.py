"""Shared numerical substrate: quadrature, root finding, dense eigenproblems,
and a radial ODE integrator.

All physics modules work in natural units hbar = m = 1, where m is the mass
of the reference particle.  Everything here is a pure function of its inputs.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.integrate import solve_ivp
from scipy.optimize import brentq

__all__ = [
    "QuadratureRule",
    "BracketingError",
    "ConvergenceError",
    "find_root",
    "scan_sign_changes",
    "gauss_legendre",
    "gauss_legendre_log",
    "smallest_eigenvalue",
    "det_sign",
    "integrate_radial",
]


class BracketingError(ValueError):
    """Raised when a root bracket does not straddle a sign change."""


class ConvergenceError(RuntimeError):
    """Raised when an iterative solver fails to converge."""


@dataclass(frozen=True)
class QuadratureRule:
    """Nodes and weights of a quadrature rule on a mapped interval.

    ``mapping`` records the change of variable: "linear" on [lo, hi] or
    "log" on [p_min, p_max] (nodes placed uniformly in ln p).
    """

    nodes: np.ndarray
    weights: np.ndarray
    mapping: str = "linear"

    def __post_init__(self):
        object.__setattr__(self, "nodes", np.asarray(self.nodes, dtype=float))
        object.__setattr__(self, "weights", np.asarray(self.weights, dtype=float))
        if np.any(self.weights <= 0):
            raise ValueError("quadrature weights must be strictly positive")
        if np.any(np.diff(self.nodes) <= 0):
            raise ValueError("quadrature nodes must be strictly increasing")

    def integrate(self, f) -> float:
        return float(np.dot(self.weights, f(self.nodes)))


def find_root(f, lo: float, hi: float, tol: float = 1e-12) -> float:
    """Bracketed root of a continuous scalar function.

    Brent's method (inverse-quadratic with a bisection fallback), so
    convergence is guaranteed for a valid bracket.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    flo, fhi = f(lo), f(hi)
    if np.isnan(flo) or np.isnan(fhi):
        raise ConvergenceError("function returned NaN at a bracket endpoint")
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if flo * fhi > 0:
        raise BracketingError(f"no sign change on [{lo}, {hi}]")
    return brentq(f, lo, hi, xtol=tol, rtol=4 * np.finfo(float).eps)


def scan_sign_changes(f, grid) -> list[tuple[float, float]]:
    """Brackets [x_i, x_{i+1}] of ``grid`` on which f changes sign."""
    grid = np.asarray(grid, dtype=float)
    vals = np.array([f(x) for x in grid])
    idx = np.nonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0)[0]
    return [(grid[i], grid[i + 1]) for i in idx]


def gauss_legendre(n: int, lo: float, hi: float) -> QuadratureRule:
    """n-point Gauss-Legendre rule on [lo, hi]; exact for degree <= 2n-1."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if not lo < hi:
        raise ValueError("need lo < hi")
    x, w = leggauss(n)
    mid, half = 0.5 * (hi + lo), 0.5 * (hi - lo)
    return QuadratureRule(mid + half * x, half * w, mapping="linear")


def gauss_legendre_log(n: int, p_min: float, p_max: float) -> QuadratureRule:
    """Gauss-Legendre rule mapped logarithmically onto [p_min, p_max].

    Nodes p = e^t with t Gauss-Legendre on [ln p_min, ln p_max]; weights
    absorb the Jacobian dp = p dt.  Suited to integrands varying over many
    decades, e.g. momentum-space kernels.
    """
    if not 0 < p_min < p_max:
        raise ValueError("need 0 < p_min < p_max")
    t = gauss_legendre(n, np.log(p_min), np.log(p_max))
    p = np.exp(t.nodes)
    return QuadratureRule(p, p * t.weights, mapping="log")


def smallest_eigenvalue(matrix) -> tuple[float, np.ndarray]:
    """Eigenvalue of smallest magnitude of a real (possibly nonsymmetric)
    matrix, with its eigenvector.

    Complex pairs are skipped: the STM kernels this is used on have a real
    near-singular eigenvalue at the energies of interest, and its real
    crossing is what locates det M(E) = 0.
    """
    m = np.asarray(matrix, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("matrix must be square")
    vals, vecs = np.linalg.eig(m)
    real = np.abs(vals.imag) <= 1e-8 * (1.0 + np.abs(vals.real))
    if not np.any(real):
        raise ConvergenceError("no real eigenvalue found")
    sub = np.nonzero(real)[0]
    k = sub[np.argmin(np.abs(vals[sub]))]
    v = vecs[:, k].real
    return float(vals[k].real), v / np.linalg.norm(v)


def det_sign(matrix) -> float:
    """Sign of det(M) via LU (slogdet); robust for badly scaled kernels."""
    sign, _ = np.linalg.slogdet(np.asarray(matrix, dtype=float))
    return float(sign)


def integrate_radial(
    potential,
    energy: float,
    r0: float,
    r1: float,
    n: int = 2000,
    u0: float = 0.0,
    du0: float = 1.0,
    weight: float = 2.0,
    rtol: float = 1e-12,
):
    """Integrate the radial equation u'' = weight * (V(r) - E) * u outward.

    The default weight 2 corresponds to unit mass in natural units; two-body
    relative motion with reduced mass 1/2 uses weight 1, so that
    E = hbar^2 k^2 / m.

    Returns
    -------
    r : ndarray, shape (n,)
        Uniform sample grid from r0 to r1.
    u : ndarray, shape (n,)
        Solution samples.
    logder : float
        u'(r1)/u(r1).
    """
    if not r0 < r1:
        raise ValueError("need r0 < r1")

    def rhs(r, y):
        return [y[1], weight * (potential(r) - energy) * y[0]]

    r = np.linspace(r0, r1, n)
    scale = max(abs(u0), abs(du0) * (r1 - r0), 1.0)
    sol = solve_ivp(
        rhs,
        (r0, r1),
        [u0, du0],
        t_eval=r,
        method="DOP853",
        rtol=rtol,
        atol=1e-14 * scale,
        dense_output=False,
    )
    if not sol.success:
        raise ConvergenceError(f"radial integration failed: {sol.message}")
    u, du = sol.y
    if u[-1] == 0.0:
        raise ConvergenceError("u(r1) = 0; log-derivative undefined")
    return r, u, float(du[-1] / u[-1])
