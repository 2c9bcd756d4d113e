"""Zero-range universal observables for three identical bosons.

The trimer spectrum in the (1/a, kappa) plane is one log-periodic curve;
everything here evaluates that curve and the constants derived from it.
Natural units hbar = m = 1 throughout; ``kappa_star`` is the binding wave
number of the reference level n = 0 at unitarity.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .channels import LAMBDA0, S0
from .numerics import find_root
from .two_body import VirtualStateError, a_B

__all__ = [
    "A_MINUS_KAPPA",
    "A_PLUS_KAPPA",
    "A_STAR_KAPPA",
    "RECOMBINATION_C",
    "PolarSpectrumPoint",
    "ThreeBodyParameter",
    "delta",
    "delta_branch_joints",
    "trimer_energy",
    "trimer_point",
    "threshold_constants",
    "universal_relations",
    "modified_trimer_energy",
    "renormalization_coefficient",
    "recombination_rate",
    "resonance_width",
]

# exact universal relation constants (zero-range theory)
A_MINUS_KAPPA = -1.50763
A_PLUS_KAPPA = 0.32
A_STAR_KAPPA = 0.0707645086901
RECOMBINATION_C = 4590.0

_XI_LO, _XI_HI = -np.pi, -np.pi / 4


@dataclass(frozen=True)
class PolarSpectrumPoint:
    """One trimer state in polar coordinates of the (1/a, kappa) plane.

    kappa is the signed wave number E sqrt(m/(hbar^2 |E|)), negative for
    bound states, so 1/a = h cos(xi), kappa = h sin(xi) with
    xi in [-pi, -pi/4].
    """

    inv_a: float
    kappa: float
    level: int

    def __post_init__(self):
        if self.kappa > 0:
            raise ValueError("bound-state kappa must be <= 0")

    @property
    def h(self) -> float:
        return math.hypot(self.inv_a, self.kappa)

    @property
    def xi(self) -> float:
        return math.atan2(self.kappa, self.inv_a)

    @property
    def energy(self) -> float:
        return -self.kappa**2


@dataclass(frozen=True)
class ThreeBodyParameter:
    """kappa_star with its inelasticity; defined modulo factors lambda_0."""

    kappa_star: float
    eta: float = 0.0

    def __post_init__(self):
        if not self.kappa_star > 0:
            raise ValueError("kappa_star must be positive")
        if self.eta < 0:
            raise ValueError("eta must be >= 0")

    @property
    def representation_equivalents(self) -> dict:
        a_minus, a_plus, a_star = universal_relations(self.kappa_star)
        return {"a_minus": a_minus, "a_plus": a_plus, "a_star": a_star}


def delta(xi):
    """Piecewise-polynomial fit of the universal trimer-curve function.

    Defined on xi in [-pi, -pi/4]; the three branches are continuous at the
    joints to about 1e-2 and satisfy delta(-pi/2) = 0 exactly.
    """
    xi = np.asarray(xi, dtype=float)
    if np.any(xi < _XI_LO - 1e-12) or np.any(xi > _XI_HI + 1e-12):
        raise ValueError("xi outside [-pi, -pi/4]")
    z = xi + np.pi
    y = xi + np.pi / 2
    x = np.sqrt(np.maximum(-xi - np.pi / 4, 0.0))
    low = -0.825 - 0.05 * z - 0.77 * z**2 + 1.26 * z**3 - 0.37 * z**4
    mid = 2.11 * y + 1.96 * y**2 + 1.38 * y**3
    high = 6.027 - 9.64 * x + 3.14 * x**2
    out = np.where(xi <= -5 * np.pi / 8, low, np.where(xi <= -3 * np.pi / 8, mid, high))
    return out if out.ndim else float(out)


def delta_branch_joints() -> list[tuple[float, float, float]]:
    """(xi, left value, right value) at the two interior branch joints."""
    out = []
    for xi, lo_branch, hi_branch in (
        (-5 * np.pi / 8, "low", "mid"),
        (-3 * np.pi / 8, "mid", "high"),
    ):
        left = float(delta(xi - 1e-13)) if lo_branch == "low" else float(delta(xi))
        z = xi + np.pi
        y = xi + np.pi / 2
        x = math.sqrt(max(-xi - np.pi / 4, 0.0))
        vals = {
            "low": -0.825 - 0.05 * z - 0.77 * z**2 + 1.26 * z**3 - 0.37 * z**4,
            "mid": 2.11 * y + 1.96 * y**2 + 1.38 * y**3,
            "high": 6.027 - 9.64 * x + 3.14 * x**2,
        }
        out.append((float(xi), vals[lo_branch], vals[hi_branch]))
    return out


def _log_radius_sq(n: int, xi: float, kappa_star: float) -> float:
    """ln of the squared polar radius of level n at angle xi."""
    return 2.0 * math.log(kappa_star) - 2.0 * np.pi * n / S0 + float(delta(xi)) / S0


def trimer_point(n: int, inv_a: float, kappa_star: float) -> PolarSpectrumPoint | None:
    """Level-n trimer state at inverse scattering length 1/a, or None when
    the level does not exist there (beyond its a- or a* threshold).

    Solves h(xi)^2 = kappa_star^2 e^{-2 pi n / s0} e^{delta(xi)/s0} along
    the radial ray 1/a = h cos(xi).
    """
    if not kappa_star > 0:
        raise ValueError("kappa_star must be positive")
    if inv_a == 0.0:
        kap = -kappa_star * math.exp(-np.pi * n / S0)
        return PolarSpectrumPoint(0.0, kap, n)

    if inv_a < 0:
        xi_lo, xi_hi = _XI_LO, -np.pi / 2
    else:
        xi_lo, xi_hi = -np.pi / 2, _XI_HI

    def g(xi):
        # ln h_ray^2 - ln h_curve^2; +inf toward xi = -pi/2 where cos -> 0
        return 2.0 * math.log(abs(inv_a / math.cos(xi))) - _log_radius_sq(n, xi, kappa_star)

    eps = 1e-9
    if inv_a < 0:
        if g(xi_lo) >= 0:
            return None  # |a| < |a_-^(n)|: level absorbed in the 3-body continuum
        if g(xi_hi - eps) < 0:
            # |1/a| so small the crossing sits inside the guard band at
            # -pi/2: indistinguishable from unitarity at double precision
            return PolarSpectrumPoint(inv_a, -kappa_star * math.exp(-np.pi * n / S0), n)
        xi = find_root(g, xi_lo, xi_hi - eps, tol=1e-14)
    else:
        if g(xi_hi) >= 0:
            return None  # a < a_*^(n): level below the particle-dimer crossing
        if g(xi_lo + eps) < 0:
            return PolarSpectrumPoint(inv_a, -kappa_star * math.exp(-np.pi * n / S0), n)
        xi = find_root(g, xi_lo + eps, xi_hi, tol=1e-14)
    h = abs(inv_a / math.cos(xi))
    return PolarSpectrumPoint(inv_a, h * math.sin(xi), n)


def trimer_energy(n: int, inv_a: float, kappa_star: float) -> float | None:
    """Energy E^(n) < 0 of the universal trimer level, or None if absent."""
    pt = trimer_point(n, inv_a, kappa_star)
    return None if pt is None else pt.energy


def threshold_constants() -> tuple[float, float]:
    """(kappa_star * a_minus, kappa_star * a_star) implied by delta().

    Closed forms from the E = 0 and dimer-crossing ends of the curve:
    -e^{-delta(-pi)/(2 s0)} and sqrt(2) e^{-delta(-pi/4)/(2 s0)}.
    """
    ka_minus = -math.exp(-float(delta(-np.pi)) / (2.0 * S0))
    ka_star = math.sqrt(2.0) * math.exp(-float(delta(-np.pi / 4)) / (2.0 * S0))
    return ka_minus, ka_star


def universal_relations(kappa_star: float) -> tuple[float, float, float]:
    """(a_minus, a_plus, a_star) for a given kappa_star (exact constants)."""
    if not kappa_star > 0:
        raise ValueError("kappa_star must be positive")
    return (
        A_MINUS_KAPPA / kappa_star,
        A_PLUS_KAPPA / kappa_star,
        A_STAR_KAPPA / kappa_star,
    )


def modified_trimer_energy(
    n: int, a: float, r_e: float, kappa_star: float, Gamma_n: float = 0.0
) -> float | None:
    """Finite-range-corrected trimer energy: a -> a_B (T-matrix pole length)
    and kappa_star -> kappa_star + Gamma_n/a in the universal formula.

    Gamma_n is an empirical per-level coefficient; raises VirtualStateError
    when the a_B branch turns complex (2 r_e/a > 1).
    """
    inv_ab = 0.0 if np.isinf(a) else 1.0 / a_B(a, r_e)
    ks = kappa_star if np.isinf(a) else kappa_star + Gamma_n / a
    if not ks > 0:
        raise ValueError("shifted three-body parameter must stay positive")
    return trimer_energy(n, inv_ab, ks)


def renormalization_coefficient(a: float, kappa_star: float, Gamma_n: float) -> float:
    """lambda_n = (1 + Gamma_n/(kappa_star a))^{-1}, the per-level scale
    mapping finite-range spectra back onto the universal curve."""
    return 1.0 / (1.0 + Gamma_n / (kappa_star * a))


def recombination_rate(a: float, a_minus: float, eta: float, mass: float = 1.0, hbar: float = 1.0):
    """Three-body recombination loss coefficient L3 for a < 0.

    L3 = C sinh(2 eta) / (sin^2[s0 ln(a/a_minus)] + sinh^2 eta) * hbar a^4/m.
    Returns inf (divergence flag) at the eta = 0 resonance peaks.
    """
    if not (a < 0 and a_minus < 0):
        raise ValueError("recombination formula applies to a < 0")
    if eta < 0:
        raise ValueError("eta must be >= 0")
    denom = math.sin(S0 * math.log(a / a_minus)) ** 2 + math.sinh(eta) ** 2
    if denom == 0.0:
        return math.inf
    return RECOMBINATION_C * math.sinh(2.0 * eta) / denom * hbar * a**4 / mass


def resonance_width(energy: float, eta: float) -> float:
    """Decay width Gamma = (4 eta / s0) E of a lossy Efimov state (small eta)."""
    if eta < 0:
        raise ValueError("eta must be >= 0")
    return 4.0 * eta / S0 * energy
