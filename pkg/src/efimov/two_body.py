"""Two-body layer: potential library, zero-energy scattering, separable
form factors (analytic and EST-constructed), and on-shell T-matrix models.

Units are natural, hbar = m = 1 with reduced mass 1/2 for equal partners,
so that the relative kinetic energy is hbar^2 k^2 / m and the radial
equation at energy E reads u'' = (V - E) u.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.integrate import quad, solve_ivp
from scipy.interpolate import CubicSpline
from scipy.special import gamma as gamma_fn
from scipy.special import jv

from .numerics import ConvergenceError, find_root, gauss_legendre_log

__all__ = [
    "TwoBodyModel",
    "ZeroEnergyState",
    "FormFactor",
    "TMatrixModel",
    "solve_zero_energy",
    "tune_to_scattering_length",
    "tune_to_unitarity",
    "universal_tail_wavefunction",
    "vdw_tail_wavefunction",
    "half_effective_range_tail",
    "est_form_factor",
    "step_form_factor",
    "universal_tail_form_factor",
    "vdw_form_factor",
    "dimer_energy",
    "dimer_energy_first_order",
    "a_B",
    "VirtualStateError",
]

_POTENTIAL_KINDS = (
    "square_well",
    "gaussian",
    "poschl_teller",
    "morse",
    "yukawa",
    "exponential",
    "lennard_jones_6_12",
    "vdw_hard_core",
    "power_law_tail",
)


@dataclass(frozen=True)
class TwoBodyModel:
    """A local radial potential in natural units.

    Parameters live in ``params``; every kind uses ``range`` as its length
    scale except the hard-core tails, which use the tail coefficient and a
    core radius.  ``reduced_mass`` defaults to 1/2 (equal partners).
    """

    kind: str
    params: dict
    reduced_mass: float = 0.5

    def __post_init__(self):
        if self.kind not in _POTENTIAL_KINDS:
            raise ValueError(f"unknown potential kind {self.kind!r}")
        if self.kind == "power_law_tail" and not self.params.get("n", 6) > 3:
            raise ValueError("power-law tail requires exponent n > 3")

    @property
    def core_radius(self) -> float:
        if self.kind in ("vdw_hard_core", "power_law_tail"):
            return float(self.params["core"])
        return 0.0

    @property
    def length_scale(self) -> float:
        p = self.params
        if self.kind == "vdw_hard_core":
            return 0.5 * p["c6"] ** 0.25  # l_vdW for reduced mass 1/2
        if self.kind == "power_law_tail":
            n = p["n"]
            return 0.5 * p["cn"] ** (1.0 / (n - 2.0))
        if self.kind == "lennard_jones_6_12":
            return 0.5 * p["c6"] ** 0.25
        return float(p["range"])

    def potential(self, r):
        """V(r); hard cores return +inf inside the core."""
        r = np.asarray(r, dtype=float)
        p = self.params
        if self.kind == "square_well":
            v = np.where(r < p["range"], -p["depth"], 0.0)
        elif self.kind == "gaussian":
            v = -p["depth"] * np.exp(-((r / p["range"]) ** 2))
        elif self.kind == "poschl_teller":
            lam = p["lambda"]
            v = -lam * (lam + 1) / p["range"] ** 2 / np.cosh(r / p["range"]) ** 2
        elif self.kind == "morse":
            y = np.exp(-(r - p.get("r0", p["range"])) / p["range"])
            v = p["depth"] * (y * y - 2 * y)
        elif self.kind == "yukawa":
            v = -p["strength"] * np.exp(-r / p["range"]) / np.maximum(r, 1e-300)
        elif self.kind == "exponential":
            v = -p["depth"] * np.exp(-r / p["range"])
        elif self.kind == "lennard_jones_6_12":
            v = p["c12"] / r**12 - p["c6"] / r**6
        elif self.kind == "vdw_hard_core":
            v = np.where(r <= p["core"], np.inf, -p["c6"] / np.maximum(r, p["core"]) ** 6)
        else:  # power_law_tail
            n = p["n"]
            v = np.where(r <= p["core"], np.inf, -p["cn"] / np.maximum(r, p["core"]) ** n)
        return v


@dataclass(frozen=True)
class ZeroEnergyState:
    """Zero-energy s-wave scattering solution phi(r) = r psi(r), normalized
    to phi(r) -> 1 - r/a outside the potential."""

    inv_a: float
    r_e: float
    r: np.ndarray
    phi: np.ndarray
    node_count: int
    fit_residual: float = 0.0

    @property
    def a(self) -> float:
        return np.inf if self.inv_a == 0 else 1.0 / self.inv_a


def solve_zero_energy(
    model: TwoBodyModel,
    r_max: float = None,
    samples: int = 20000,
    rtol: float = 1e-12,
) -> ZeroEnergyState:
    """Integrate the zero-energy radial equation and extract (a, r_e).

    The scattering length comes from matching u to alpha + beta r at the
    outer radius; the effective range from the integral
    (1/2) r_e = int [ (1-r/a)^2 - phi^2 ] dr.
    """
    b = model.length_scale
    r0 = model.core_radius if model.core_radius > 0 else 1e-9 * b
    if r_max is None:
        r_max = 40.0 * b
    weight = 2.0 * model.reduced_mass

    def rhs(r, y):
        return [y[1], weight * (model.potential(r) - 0.0) * y[0]]

    sol = solve_ivp(
        rhs, (r0, r_max), [0.0, 1.0], method="DOP853",
        rtol=rtol, atol=1e-15 * r_max, dense_output=True,
    )
    if not sol.success:
        raise ConvergenceError(f"zero-energy integration failed: {sol.message}")
    u_end, du_end = sol.y[0, -1], sol.y[1, -1]
    beta = du_end
    alpha = u_end - du_end * r_max
    # check the asymptote really is linear: compare against a second match point
    r_chk = 0.8 * r_max
    u_chk = sol.sol(r_chk)[0]
    resid = abs(u_chk - (alpha + beta * r_chk)) / max(abs(u_chk), 1e-300)
    if resid > 1e-5:
        raise ConvergenceError(
            f"tail not linear at r_max={r_max:g} (residual {resid:.2e}); increase r_max"
        )
    rg = np.linspace(r0, r_max, samples)
    u = sol.sol(rg)[0]
    if alpha == 0.0:
        inv_a = 0.0
        # at unitarity normalize to the constant tail u -> alpha' = u(r_max)
        phi = u / u_end
    else:
        inv_a = -beta / alpha  # a = -alpha/beta from u -> alpha + beta r = alpha (1 - r/a)
        phi = u / alpha
    phibar = 1.0 - rg * inv_a
    r_e = 2.0 * np.trapezoid(phibar**2 - phi**2, rg)
    nodes = int(np.count_nonzero(np.diff(np.sign(phi[np.abs(phi) > 0])) != 0))
    return ZeroEnergyState(float(inv_a), float(r_e), rg, phi, nodes, float(resid))


def tune_to_scattering_length(
    model: TwoBodyModel,
    param: str,
    bracket: tuple[float, float],
    inv_a_target: float = 0.0,
    **solve_kw,
) -> TwoBodyModel:
    """Adjust one potential parameter so the model has the target 1/a.

    1D root-find on 1/a(param); the bracket must straddle the target
    without crossing a resonance pole of a itself (1/a is continuous there,
    so only the target bracket matters).
    """

    def f(x):
        m = replace(model, params={**model.params, param: x})
        return solve_zero_energy(m, **solve_kw).inv_a - inv_a_target

    x_star = find_root(f, *bracket, tol=1e-13)
    return replace(model, params={**model.params, param: x_star})


def tune_to_unitarity(model, param, bracket, **kw) -> TwoBodyModel:
    return tune_to_scattering_length(model, param, bracket, 0.0, **kw)


def universal_tail_wavefunction(n: float, x):
    """Zero-energy radial wave function at unitarity for a -C_n/r^n tail.

    phi(x) = Gamma((n-1)/(n-2)) sqrt(x) J_{1/(n-2)}(2 x^{-(n-2)/2}) with
    x = r/l_n; tends to 1 for x -> infinity.
    """
    if not n > 3:
        raise ValueError("need tail exponent n > 3")
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0):
        raise ValueError("x must be positive")
    nu = 1.0 / (n - 2.0)
    return gamma_fn((n - 1.0) / (n - 2.0)) * np.sqrt(x) * jv(nu, 2.0 * x ** (-(n - 2.0) / 2.0))


def vdw_tail_wavefunction(x, inv_a: float = 0.0):
    """Zero-energy wave function in the van der Waals region at finite a.

    The two Bessel branches combine so that phi -> 1 - x * (l_vdW/a) at
    large x; inv_a is measured in units of 1/l_vdW.  Reduces to the
    universal n = 6 form at unitarity.
    """
    x = np.asarray(x, dtype=float)
    z = 2.0 * x**-2.0
    return np.sqrt(x) * (
        gamma_fn(1.25) * jv(0.25, z) - inv_a * gamma_fn(0.75) * jv(-0.25, z)
    )


def half_effective_range_tail(n: float, x_split: float = None) -> float:
    """(1/2) r_e / l_n at unitarity from the wave-function integral.

    Splits the integral at small x (oscillatory region, WKB envelope
    integrated in closed form) and large x (algebraic tail integrated
    analytically).
    """
    nu = 1.0 / (n - 2.0)
    if x_split is None:
        x_split = (2.0 / 120.0) ** (2.0 / (n - 2.0))  # Bessel argument ~120
    x_top = 50.0

    def integrand(x):
        return 1.0 - universal_tail_wavefunction(n, x) ** 2

    val, _ = quad(integrand, x_split, x_top, limit=4000)
    # below x_split: 1 contributes x_split; phi^2 has WKB envelope
    # Gamma^2 x^{1+(n-2)/2}/(2 pi) after averaging the oscillation
    g2 = gamma_fn((n - 1.0) / (n - 2.0)) ** 2
    pow_ = 2.0 + (n - 2.0) / 2.0
    small = x_split - g2 * x_split**pow_ / (2.0 * np.pi * pow_)
    # beyond x_top: 1 - phi^2 ~ 2 x^{-(n-2)}/(1+nu)
    tail = 2.0 * x_top ** (-(n - 3.0)) / ((1.0 + nu) * (n - 3.0))
    return float(small + val + tail)


@dataclass(frozen=True)
class FormFactor:
    """Momentum profile phi(p) of a rank-one separable potential.

    phi(0) = 1 by normalization.  ``g`` is the interaction strength fixed
    by the scattering length through
    g = 4 pi [ 1/a - (2/pi) int_0^inf phi(p)^2 dp ]^{-1} (natural units).
    ``p_max`` bounds the momenta at which the profile is trustworthy.
    """

    fn: object
    inv_a: float
    p_max: float
    kind: str = "custom"
    meta: dict = field(default_factory=dict)

    def __call__(self, p):
        return self.fn(np.asarray(p, dtype=float))

    @property
    def g(self) -> float:
        rule = gauss_legendre_log(2000, 1e-8 * self.p_max, self.p_max)
        norm = self.inv_a - (2.0 / np.pi) * float(np.dot(rule.weights, self(rule.nodes) ** 2))
        return 4.0 * np.pi / norm

    def tabulate(self, n: int = 400):
        p = np.geomspace(1e-4 * self.p_max, self.p_max, n)
        return p, self(p)


def _sine_transform_profile(r, delta, p_tab):
    """phi(p) = 1 - p * int delta(r) sin(pr) dr on a fixed momentum table."""
    out = np.empty(p_tab.size + 1)
    out[0] = 1.0
    for i, p in enumerate(p_tab, 1):
        out[i] = 1.0 - p * np.trapezoid(delta * np.sin(p * r), r)
    return out


def _spline_form_factor(p_tab, values, inv_a, p_max, kind, meta=None):
    spl = CubicSpline(np.concatenate([[0.0], p_tab]), values)
    top = p_tab[-1]

    def fn(p):
        return np.where(p <= top, spl(np.minimum(p, top)), spl(top))

    return FormFactor(fn, inv_a, p_max, kind, meta or {})


def est_form_factor(state: ZeroEnergyState, p_max: float = 60.0, n_p: int = 800) -> FormFactor:
    """Rank-one separable profile reproducing a zero-energy state exactly.

    phi(p) = 1 - p int (phibar - phi) sin(pr) dr; the input state must
    have converged linear asymptotics so that the integrand vanishes beyond
    the sampled range.
    """
    if state.fit_residual > 1e-5:
        raise ConvergenceError("zero-energy state asymptotics not converged")
    r = state.r
    delta = (1.0 - r * state.inv_a) - state.phi
    q_top = 2.2 * p_max
    # resolve the sine oscillation: need enough r samples per period at q_top
    if (r[1] - r[0]) * q_top > 0.5:
        rg = np.arange(r[0], r[-1], 0.4 / q_top)
        delta = np.interp(rg, r, delta)
        r = rg
    p_tab = np.geomspace(1e-4, q_top, n_p)
    vals = _sine_transform_profile(r, delta, p_tab)
    return _spline_form_factor(p_tab, vals, state.inv_a, p_max, "est")


def step_form_factor(half_re: float = 1.0, inv_a: float = 0.0, p_max: float = 100.0) -> FormFactor:
    """Separable profile of the step-function wave function: phi(p) = cos(p b)
    with step position b = r_e/2 (deep-potential limit class)."""
    b = float(half_re)

    def fn(p):
        return np.cos(p * b)

    return FormFactor(fn, inv_a, p_max, "step", {"half_re": b})


def universal_tail_form_factor(n: int, p_max: float = 80.0, n_p: int = 900) -> FormFactor:
    """EST profile of the universal -C_n/r^n tail wave function at unitarity.

    Lengths in units of l_n.  The short-distance oscillatory region needs a
    fine r grid; below the innermost sampled x the deficit 1 - phi is
    replaced by its limit (phi's envelope is negligible there).
    """
    if n == 4:
        r1 = np.arange(1e-6, 0.2, 5e-6)
        r2 = np.arange(0.2, 120.0, 4e-4)
        r = np.concatenate([r1, r2])
        delta = 1.0 - universal_tail_wavefunction(4, r)
    elif n == 6:
        r1 = np.arange(1e-6, 0.3, 2e-5)
        r2 = np.arange(0.3, 80.0, 8e-4)
        r = np.concatenate([r1, r2])
        delta = 1.0 - universal_tail_wavefunction(6, r)
        delta[r < 0.085] = 1.0  # phi envelope < 0.012 inside
    else:
        raise ValueError("tail form factors implemented for n in (4, 6)")
    q_top = 2.2 * p_max
    p_tab = np.geomspace(1e-4, q_top, n_p)
    vals = _sine_transform_profile(r, delta, p_tab)
    return _spline_form_factor(p_tab, vals, 0.0, p_max, f"power{n}", {"n": n})


_VDW_CACHE: dict = {}


def vdw_form_factor(inv_a: float = 0.0, p_max: float = 80.0, n_p: int = 900) -> FormFactor:
    """EST profile of the van der Waals zero-energy state at 1/a = inv_a
    (units of 1/l_vdW).

    phi_a(p) is linear in 1/a, so the two sine transforms (unitarity part
    and the J_{-1/4} admixture) are precomputed once and reused across the
    whole scattering-length family.
    """
    key = (p_max, n_p)
    if key not in _VDW_CACHE:
        r1 = np.arange(1e-6, 0.3, 2e-5)
        r2 = np.arange(0.3, 80.0, 8e-4)
        r = np.concatenate([r1, r2])
        z = 2.0 * np.maximum(r, 1e-6) ** -2.0
        d0 = 1.0 - gamma_fn(1.25) * np.sqrt(r) * jv(0.25, z)
        d0[r < 0.085] = 1.0
        d1 = r - gamma_fn(0.75) * np.sqrt(r) * jv(-0.25, z)
        d1[r < 0.085] = r[r < 0.085]
        q_top = 2.2 * p_max
        p_tab = np.geomspace(1e-4, q_top, n_p)
        s0 = 1.0 - _sine_transform_profile(r, d0, p_tab)  # p * transform of d0
        s1 = 1.0 - _sine_transform_profile(r, d1, p_tab)
        full = np.concatenate([[0.0], p_tab])
        _VDW_CACHE[key] = (
            CubicSpline(full, np.concatenate([[0.0], s0[1:]])),
            CubicSpline(full, np.concatenate([[0.0], s1[1:]])),
            p_tab[-1],
        )
    sp0, sp1, top = _VDW_CACHE[key]

    def fn(p, _inv_a=float(inv_a)):
        pc = np.minimum(p, top)
        return 1.0 - sp0(pc) + _inv_a * sp1(pc)

    return FormFactor(fn, float(inv_a), p_max, "vdw", {"inv_a": float(inv_a)})


class VirtualStateError(ValueError):
    """The effective-range pole moved to the virtual-state branch."""


@dataclass(frozen=True)
class TMatrixModel:
    """Analytic or separable on-shell T-matrix model.

    kind: zero_range(a, cutoff), effective_range(a, r_e),
    narrow_resonance(a, r_star), separable(FormFactor).
    """

    kind: str
    a: float = np.inf
    cutoff: float = np.inf
    r_e: float = 0.0
    r_star: float = 0.0
    form: FormFactor = None

    def __post_init__(self):
        if self.kind not in ("zero_range", "effective_range", "narrow_resonance", "separable"):
            raise ValueError(f"unknown T-matrix kind {self.kind!r}")
        if self.kind == "narrow_resonance" and not self.r_star > 0:
            raise ValueError("narrow resonance requires r_star > 0")

    @property
    def inv_a(self) -> float:
        return 0.0 if np.isinf(self.a) else 1.0 / self.a


def dimer_energy(model: TMatrixModel) -> float:
    """Bound-state pole of the on-shell T-matrix on the imaginary k axis.

    Returns E = -kappa^2 in natural units (multiply by hbar^2/m for
    physical energies); None when the model has no dimer.
    """
    inv_a = model.inv_a
    if model.kind == "zero_range":
        if inv_a <= 0:
            return None
        if np.isinf(model.cutoff):
            return -(inv_a**2)
        kap = find_root(
            lambda k: inv_a - (2 / np.pi) * k * np.arctan(model.cutoff / k),
            1e-12 * inv_a, model.cutoff,
        )
        return -(kap**2)
    if model.kind == "effective_range":
        if inv_a <= 0:
            return None
        disc = 1.0 - 2.0 * model.r_e * inv_a
        if disc < 0:
            raise VirtualStateError("1 - 2 r_e/a < 0: no real pole")
        kap = (1.0 - np.sqrt(disc)) / model.r_e if model.r_e != 0 else inv_a
        return -(kap**2)
    if model.kind == "narrow_resonance":
        if inv_a <= 0:
            return None
        kap = (-1.0 + np.sqrt(1.0 + 4.0 * model.r_star * inv_a)) / (2.0 * model.r_star)
        return -(kap**2)
    # separable: root of 1/a = (2/pi) int phi^2 kap^2/(p^2+kap^2) dp
    form = model.form
    rule = gauss_legendre_log(3000, 1e-8 * form.p_max, 2.2 * form.p_max)
    q, w = rule.nodes, rule.weights
    phi2 = form(q) ** 2

    def cond(kap):
        return form.inv_a - (2 / np.pi) * np.dot(w, phi2 * kap**2 / (q**2 + kap**2))

    if form.inv_a <= 0:
        return None
    if cond(form.p_max) > 0:
        return None  # pole beyond the profile's validity window
    kap = find_root(cond, 1e-10 * form.p_max, form.p_max)
    return -(kap**2)


def dimer_energy_first_order(a: float, r_e: float) -> float:
    """Dimer energy with the effective-range correction kept to first order
    in the pole wave number: kappa = (1/a)(1 + r_e/(2a))."""
    kap = (1.0 / a) * (1.0 + r_e / (2.0 * a))
    return -(kap**2)


def a_B(a: float, r_e: float) -> float:
    """Length corresponding to the T-matrix pole: 1/a_B = (1-sqrt(1-2 r_e/a))/r_e."""
    disc = 1.0 - 2.0 * r_e / a
    if disc < 0:
        raise VirtualStateError("2 r_e/a > 1: pole is a virtual state")
    # rationalized form of r_e/(1 - sqrt(disc)): stable as r_e -> 0
    return 0.5 * a * (1.0 + np.sqrt(disc))
