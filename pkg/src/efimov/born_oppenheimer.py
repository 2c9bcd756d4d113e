"""Adiabatic picture for two heavy particles sharing one light particle.

The light particle (mass m = 1 here) forms an exchange-bonding orbital
whose energy eps(R) acts as a potential between the heavy pair (mass M).
This gives an analytic window on the Efimov effect for large mass ratios.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import lambertw

__all__ = [
    "OMEGA",
    "BO_CRITICAL_L1",
    "BondingPotential",
    "bonding_kappa",
    "bonding_energy",
    "effective_potential",
    "s0_estimate",
    "critical_mass_ratio_bo",
]

# Omega constant, the root of x = e^{-x}; kappa R -> Omega for R << a
OMEGA = float(lambertw(1.0).real)

# mass ratio where the L = 1 Efimov strength vanishes: (M/2m) Omega^2 = 2 + 1/4
BO_CRITICAL_L1 = 2.0 * (1.0 * 2.0 + 0.25) / OMEGA**2


def bonding_kappa(R, a: float):
    """Binding wave number kappa(R) of the light-particle bonding orbital.

    Solves kappa - e^{-kappa R}/R = 1/a in closed form,
    kappa = 1/a + W(e^{-R/a})/R with W the Lambert function; the orbital
    energy is eps(R) = -hbar^2 kappa^2 / (2m).  For a < 0 the branch
    closes at R = |a|; NaN is returned where no bound orbital exists.
    """
    R = np.asarray(R, dtype=float)
    if np.any(R <= 0):
        raise ValueError("R must be positive")
    inv_a = 0.0 if np.isinf(a) else 1.0 / a
    kap = inv_a + lambertw(np.exp(-R * inv_a)).real / R
    out = np.where(kap > 0, kap, np.nan)
    return out if out.ndim else float(out)


def bonding_energy(R, a: float):
    """eps(R) = -hbar^2 kappa(R)^2/(2m) in natural units hbar = m = 1."""
    kap = bonding_kappa(R, a)
    return -0.5 * np.asarray(kap) ** 2 if np.ndim(kap) else (
        float("nan") if math.isnan(kap) else -0.5 * kap**2
    )


@dataclass(frozen=True)
class BondingPotential:
    """Sampled bonding orbital for one heavy-light scattering length."""

    a: float
    R: np.ndarray
    kappa: np.ndarray

    @classmethod
    def sample(cls, a: float, R_grid) -> "BondingPotential":
        R = np.asarray(R_grid, dtype=float)
        return cls(a, R, np.asarray(bonding_kappa(R, a)))

    @property
    def energy(self) -> np.ndarray:
        return -0.5 * self.kappa**2


def effective_potential(R, a: float, L: int, mass_ratio: float):
    """Heavy-heavy adiabatic potential (units hbar^2/M, lengths in a units):

    V(R) = L(L+1)/R^2 + (M/hbar^2) eps(R).

    The direct heavy-heavy short-range interaction is neglected.
    """
    if L < 0 or L != int(L):
        raise ValueError("L must be a non-negative integer")
    R = np.asarray(R, dtype=float)
    eps = -0.5 * np.asarray(bonding_kappa(R, a)) ** 2
    out = L * (L + 1) / R**2 + mass_ratio * eps
    return out if out.ndim else float(out)


def s0_estimate(mass_ratio: float, L: int = 0) -> float:
    """Adiabatic Efimov strength |s0| from the R << a limit of V(R).

    |s0|^2 = (M/2m) Omega^2 - L(L+1) - 1/4.  Returns NaN (no-Efimov flag)
    when the right-hand side is negative.
    """
    if L < 0 or L != int(L):
        raise ValueError("L must be a non-negative integer")
    s2 = 0.5 * mass_ratio * OMEGA**2 - L * (L + 1) - 0.25
    return math.sqrt(s2) if s2 > 0 else float("nan")


def critical_mass_ratio_bo(L: int) -> float:
    """Mass ratio where the adiabatic Efimov strength vanishes at angular
    momentum L: M/m = 2(L(L+1) + 1/4)/Omega^2."""
    if L < 0 or L != int(L):
        raise ValueError("L must be a non-negative integer")
    return 2.0 * (L * (L + 1) + 0.25) / OMEGA**2
