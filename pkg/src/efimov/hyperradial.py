"""One-dimensional hyperradial problem: the 1/R^2 channel potential plus a
short-range three-body boundary condition.

Working coordinate is x = ln R, where the radial equation
-F'' + [(s(R)^2 - 1/4)/R^2] F = E F becomes, with F = e^{x/2} v(x),

    v'' = [s(R)^2 - E R^2] v,   R = e^x,

so in the scale-invariant window v is a pure cosine in ln R.  Natural units
hbar = m = 1 with E = -kappa^2 relative to the channel threshold.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp

from .channels import S0, ThreeBodySystem, s2_lowest
from .numerics import BracketingError, ConvergenceError, find_root

__all__ = [
    "HyperradialChannel",
    "BoundStateSet",
    "EfimovSpectrum",
    "solve_bound_states",
    "three_body_phase",
    "adiabatic_spectrum",
]

_SAMPLES = 3000


@dataclass(frozen=True)
class HyperradialChannel:
    """Hyperradial channel: exponent source plus short-range boundary.

    ``s_squared`` is either a number (fixed exponent; -S0**2 gives the
    scale-invariant attraction) or a callable s2(R).  The boundary at R0 is
    a hard wall by default, or a fixed logarithmic derivative F'/F = value
    at R0 when boundary="log_derivative" (caveat: unphysical deep levels
    can appear for strongly negative values).  ``threshold`` is the channel
    dissociation energy; bound states lie below it.
    """

    s_squared: object = -(S0**2)
    R0: float = 1.0
    boundary: str = "hard_wall"
    boundary_value: float = 0.0
    threshold: float = 0.0

    def __post_init__(self):
        if not self.R0 > 0:
            raise ValueError("R0 must be positive")
        if self.boundary not in ("hard_wall", "log_derivative"):
            raise ValueError(f"unknown boundary {self.boundary!r}")

    def s2(self, R: float) -> float:
        return self.s_squared(R) if callable(self.s_squared) else self.s_squared

    def potential(self, R):
        R = np.asarray(R, dtype=float)
        s2 = np.array([self.s2(r) for r in np.atleast_1d(R)]).reshape(R.shape)
        return (s2 - 0.25) / R**2


@dataclass(frozen=True)
class BoundStateSet:
    """Bound levels of one hyperradial channel, deepest first.

    ``profiles`` holds (R, v, dv/dx) samples of the reduced function
    v = F/sqrt(R), the quantity that is log-periodic in the
    scale-invariant window; level k has exactly k interior nodes.
    """

    channel: HyperradialChannel
    energies: tuple
    profiles: tuple

    def __post_init__(self):
        if list(self.energies) != sorted(self.energies):
            raise ValueError("energies must be ordered deepest first")

    @property
    def kappas(self) -> np.ndarray:
        return -np.sqrt(self.channel.threshold - np.asarray(self.energies))

    def node_counts(self) -> list[int]:
        """Interior nodes per level, counted in the classically allowed
        region only (the diverging tail admixture beyond the turning point
        is an artifact of finite shooting precision)."""
        out = []
        for E, (R, v, _) in zip(self.energies, self.profiles):
            allowed = np.array([self.channel.s2(r) for r in R]) - E * R**2 < 0
            body = v[1:][allowed[1:]] if self.channel.boundary == "hard_wall" else v[allowed]
            s = np.sign(body[np.abs(body) > 0])
            out.append(int(np.count_nonzero(np.diff(s) != 0)))
        return out


def _shoot(channel: HyperradialChannel, energy: float, samples: int = _SAMPLES):
    """Integrate v'' = (s2(R) - E R^2) v outward; returns (x, v, dv)."""
    kap = math.sqrt(channel.threshold - energy)
    x0 = math.log(channel.R0)
    x1 = math.log(10.0 / kap)
    if x1 <= x0 + 0.1:
        x1 = x0 + 0.1  # level pushed against the wall; tiny forbidden region

    def rhs(x, y):
        R = math.exp(x)
        # absolute energy: for R-dependent channels the threshold is already
        # contained in the large-R limit of s2(R)/R^2
        return [y[1], (channel.s2(R) - energy * R * R) * y[0]]

    if channel.boundary == "hard_wall":
        y0 = [0.0, 1.0]
    else:
        y0 = [1.0, channel.R0 * channel.boundary_value - 0.5]
    x = np.linspace(x0, x1, samples)
    sol = solve_ivp(rhs, (x0, x1), y0, t_eval=x, method="DOP853", rtol=1e-10, atol=1e-12)
    if not sol.success:
        raise ConvergenceError(f"hyperradial shot failed: {sol.message}")
    return x, sol.y[0], sol.y[1]


def _node_count(channel, energy) -> int:
    _, v, _ = _shoot(channel, energy)
    body = v[1:] if channel.boundary == "hard_wall" else v
    s = np.sign(body[np.abs(body) > 0])
    return int(np.count_nonzero(np.diff(s) != 0))


def solve_bound_states(
    channel: HyperradialChannel,
    kappa_window: tuple[float, float],
    tol: float = 1e-12,
) -> BoundStateSet:
    """All bound levels with kappa = sqrt(threshold - E) inside the window.

    Node-count bisection in ln kappa: the outward solution at energy E has
    as many interior nodes as there are levels below E, so each unit jump
    of the count brackets one eigenvalue.  An empty window returns an
    empty set.
    """
    k_lo, k_hi = kappa_window
    if not 0 < k_lo < k_hi:
        raise ValueError("need 0 < kappa_min < kappa_max")
    E = lambda kap: channel.threshold - kap * kap
    n_hi = _node_count(channel, E(k_hi))  # levels deeper than the window
    n_lo = _node_count(channel, E(k_lo))
    energies, profiles = [], []
    t_hi = math.log(k_hi)
    for k in range(n_hi, n_lo):
        t_lo = math.log(k_lo)
        lo, hi = t_lo, t_hi
        # bisect the jump of the node count from <=k to >=k+1
        while hi - lo > tol:
            mid = 0.5 * (lo + hi)
            if _node_count(channel, E(math.exp(mid))) > k:
                lo = mid
            else:
                hi = mid
        kap = math.exp(0.5 * (lo + hi))
        energies.append(E(kap))
        x, v, dv = _shoot(channel, E(kap))
        profiles.append((np.exp(x), v, dv))
        t_hi = 0.5 * (lo + hi)
    return BoundStateSet(channel, tuple(energies), tuple(profiles))


def three_body_phase(
    source, reference_scale: float = 1.0, decades: float = 2.5
) -> float:
    """Log-periodic phase Phi = |s0| ln(Lambda/Lambda0) in [0, pi).

    ``source`` is a HyperradialChannel (or a BoundStateSet, whose channel
    is used).  The zero-energy solution is integrated outward from the
    boundary; in the scale-invariant window v ~ cos(|s0| ln(Lambda R)), so
    the local phase theta = atan2(-v', |s0| v) gives
    Phi = theta - |s0| ln(R * reference_scale) (mod pi).  Raises
    ConvergenceError when the phase is not stable over the fit window.
    """
    ch = source.channel if isinstance(source, BoundStateSet) else source
    x0 = math.log(ch.R0)
    x = np.linspace(x0, x0 + decades * math.log(10.0), 800)
    R = np.exp(x)

    def rhs(t, y):
        return [y[1], ch.s2(math.exp(t)) * y[0]]

    y0 = [0.0, 1.0] if ch.boundary == "hard_wall" else [1.0, ch.R0 * ch.boundary_value - 0.5]
    sol = solve_ivp(rhs, (x[0], x[-1]), y0, t_eval=x, method="DOP853", rtol=1e-12, atol=1e-14)
    if not sol.success:
        raise ConvergenceError(f"zero-energy shot failed: {sol.message}")
    v, dv = sol.y
    mask = R > 3.0 * ch.R0  # fit past the boundary region
    s2w = np.array([ch.s2(r) for r in R[mask]])
    if np.any(s2w > -1e-12) or np.ptp(s2w) > 1e-9 * (1 + np.abs(s2w).max()):
        raise ConvergenceError("exponent not constant and attractive in the fit window")
    s0 = math.sqrt(-s2w[0])
    theta = np.arctan2(-dv[mask], s0 * v[mask])
    phi = np.mod(theta - s0 * np.log(R[mask] * reference_scale), np.pi)
    # circular mean guards the wrap-around of mod pi
    mean = 0.5 * math.atan2(np.sin(2 * phi).mean(), np.cos(2 * phi).mean()) % np.pi
    spread = np.abs(np.mod(phi - mean + np.pi / 2, np.pi) - np.pi / 2)
    if spread.max() > 1e-6:
        raise ConvergenceError(f"phase not constant in window (spread {spread.max():.1e})")
    return float(mean)


@dataclass(frozen=True)
class EfimovSpectrum:
    """Adiabatic spectrum over a 1/a scan, in polar observables.

    rows: (inv_a, level, kappa, energy) with kappa = -sqrt(|E_total|)
    measured from the three-body threshold E = 0.  metadata records the
    single-channel approximation flag.
    """

    rows: tuple
    metadata: dict = field(default_factory=dict)

    def column(self, name: str) -> np.ndarray:
        i = ("inv_a", "level", "kappa", "energy").index(name)
        return np.array([r[i] for r in self.rows])


def adiabatic_spectrum(
    system: ThreeBodySystem,
    inv_a_grid,
    R0: float,
    kappa_window: tuple[float, float],
) -> EfimovSpectrum:
    """Bound states of the lowest adiabatic channel across a 1/a scan.

    Identical-boson systems only: s2(R) = s2_lowest(R/a).  For a > 0 the
    channel threshold is the dimer energy -1/a^2, which the large-R limit
    of the channel exponent reproduces automatically; kappa is reported
    from the three-body threshold E = 0.  Non-adiabatic couplings are
    neglected (single-channel approximation, flagged in metadata).
    """
    if system.statistics != "bosons":
        raise NotImplementedError("adiabatic scan implemented for identical bosons")
    rows = []
    for inv_a in np.asarray(inv_a_grid, dtype=float):
        threshold = float(-(inv_a**2)) if inv_a > 0 else 0.0
        ch = HyperradialChannel(
            s_squared=(lambda R, ia=inv_a: s2_lowest(R * ia)),
            R0=R0,
            threshold=threshold,
        )
        try:
            states = solve_bound_states(ch, kappa_window)
        except BracketingError:
            continue
        for lvl, E in enumerate(states.energies):
            rows.append((float(inv_a), lvl, -math.sqrt(-E), float(E)))
    return EfimovSpectrum(
        tuple(rows),
        {
            "approximation": "single-channel adiabatic",
            "R0": R0,
            "kappa_window": tuple(kappa_window),
        },
    )
