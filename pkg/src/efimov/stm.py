"""Momentum-space three-body integral equations: the quantitative oracle.

Solves the s-wave spectator-amplitude equation for zero-range,
narrow-resonance, and rank-one separable interactions, plus the coupled
two-channel (triplet/singlet) nucleon model.  Natural units hbar = m = 1:
the spectator kinetic term is (3/4)P^2 and dimers sit at -kappa^2.

Trimer energies are located as sign changes of det M(E) on a logarithmic
energy scan, refined by Brent's method; dissociation thresholds a_-^(n)
come from linear eigenvalue problems in 1/a at E = 0.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import CubicSpline

from .channels import LAMBDA0, S0
from .numerics import ConvergenceError, find_root, gauss_legendre, gauss_legendre_log
from .two_body import (
    FormFactor,
    TwoBodyModel,
    est_form_factor,
    solve_zero_energy,
    tune_to_scattering_length,
)

__all__ = [
    "StmKernel",
    "SeparableKernel",
    "solve_trimers_zero_range",
    "solve_trimers_narrow_resonance",
    "solve_trimers_separable",
    "threshold_scattering_lengths",
    "a_minus_ground",
    "narrow_resonance_a_star0",
    "kappa_star_extrapolated",
    "TritonModel",
    "TritonResult",
    "solve_triton",
    "reconstruct_wavefunction",
    "ResolutionWarning",
]

_DEF_N = 400
_DEF_NANG = 48


class ResolutionWarning(UserWarning):
    """Adjacent levels closer than a few momentum-grid cells."""


def _scan_roots(det, E_window, n_scan):
    """Sign changes of det(E) on a log grid over (E_lo, E_hi), E < 0."""
    E_lo, E_hi = E_window
    if not E_lo < E_hi < 0:
        raise ValueError("need E_lo < E_hi < 0")
    Es = -np.exp(np.linspace(math.log(-E_lo), math.log(-E_hi), n_scan))
    sg = [det(E) for E in Es]
    roots = []
    for i in range(len(Es) - 1):
        if sg[i] * sg[i + 1] < 0:
            lE = find_root(
                lambda l: det(-math.exp(l)),
                math.log(-Es[i]),
                math.log(-Es[i + 1]),
                tol=1e-12,
            )
            roots.append(-math.exp(lE))
    return sorted(roots)


def _warn_resolution(energies, nodes_per_decade):
    for E_deep, E_shallow in zip(energies, energies[1:]):
        cells = nodes_per_decade * 0.5 * math.log10(E_deep / E_shallow)
        if cells < 3.0:
            warnings.warn(
                "level spacing under 3 momentum-grid cells; refine the grid",
                ResolutionWarning,
                stacklevel=3,
            )
            break


def _real_eigvals(m):
    ev = np.linalg.eigvals(m)
    keep = np.abs(ev.imag) <= 1e-8 * np.maximum(np.abs(ev), 1e-300)
    return np.real(ev[keep])


@dataclass(frozen=True)
class StmKernel:
    """Zero-range (optionally narrow-resonance) kernel on a log grid.

    The s-wave projected exchange integral is analytic,
    K(P,Q) = (2/pi)(Q/P) ln[(P^2+PQ+Q^2-E)/(P^2-PQ+Q^2-E)] w_Q,
    and the diagonal is the inverse two-body T at the shifted energy,
    1/a + R*(E - (3/4)P^2) - sqrt((3/4)P^2 - E).

    ``exact_domain`` keeps both exchange momenta |Q+P/2|, |P+Q/2| below the
    cutoff instead of the plain Q < cutoff domain; the difference is a
    cutoff-scale effect only.
    """

    inv_a: float
    cutoff: float
    r_star: float = 0.0
    n: int = _DEF_N
    p_min_factor: float = 1e-5
    exact_domain: bool = False

    def __post_init__(self):
        if not self.cutoff > 0:
            raise ValueError("cutoff must be positive")
        if self.r_star < 0:
            raise ValueError("r_star must be >= 0")

    @property
    def grid(self):
        return gauss_legendre_log(self.n, self.p_min_factor * self.cutoff, self.cutoff)

    def _exchange(self, E: float, p, wp):
        P = p[:, None]
        Q = p[None, :]
        if self.exact_domain:
            # angular upper limit keeping both shifted momenta below cutoff
            lam2 = self.cutoff**2
            c_hi = np.minimum(
                (lam2 - Q * Q - 0.25 * P * P) / (P * Q),
                (lam2 - P * P - 0.25 * Q * Q) / (P * Q),
            )
            c_hi = np.clip(c_hi, -1.0, 1.0)
            num = P * P + Q * Q + P * Q * c_hi - E
        else:
            num = P * P + P * Q + Q * Q - E
        den = P * P - P * Q + Q * Q - E
        return (2 / np.pi) * (Q / P) * np.log(num / den) * wp[None, :]

    def matrix(self, E: float) -> np.ndarray:
        if E >= 0:
            raise ValueError("bound-state search needs E < 0")
        rule = self.grid
        p, wp = rule.nodes, rule.weights
        D = self.inv_a + self.r_star * (E - 0.75 * p**2) - np.sqrt(0.75 * p**2 - E)
        return np.diag(D) + self._exchange(E, p, wp)

    def threshold_matrix(self) -> np.ndarray:
        """A with A F = (1/a) F at E = 0: diagonal sqrt(3)/2 p + (3/4) R* p^2
        minus the zero-energy exchange kernel."""
        rule = self.grid
        p, wp = rule.nodes, rule.weights
        return np.diag(np.sqrt(0.75) * p + 0.75 * self.r_star * p**2) - self._exchange(
            0.0, p, wp
        )


def solve_trimers_zero_range(
    a: float,
    cutoff: float,
    E_window: tuple[float, float],
    n: int = _DEF_N,
    r_star: float = 0.0,
    exact_domain: bool = False,
    n_scan: int = 400,
    p_min_factor: float = 1e-5,
) -> list[float]:
    """Trimer energies of the zero-range theory with sharp cutoff, deepest
    first.  The cutoff is the three-body parameter: energies depend on it
    only through the equivalence class cutoff * e^{n pi/|s0|}."""
    inv_a = 0.0 if np.isinf(a) else 1.0 / a
    kern = StmKernel(
        inv_a, cutoff, r_star=r_star, exact_domain=exact_domain, n=n,
        p_min_factor=p_min_factor,
    )

    def det(E):
        return float(np.linalg.slogdet(kern.matrix(E))[0])

    roots = _scan_roots(det, E_window, n_scan)
    if inv_a > 0:
        # discard the atom-dimer continuum: the dimer pole shifts with R*
        kd = (
            (-1.0 + math.sqrt(1.0 + 4.0 * r_star * inv_a)) / (2.0 * r_star)
            if r_star > 0
            else inv_a
        )
        roots = [E for E in roots if E < -(kd**2)]
    _warn_resolution(roots, n / math.log10(cutoff / (kern.p_min_factor * cutoff)))
    return roots


def solve_trimers_narrow_resonance(
    a: float,
    r_star: float,
    E_window: tuple[float, float],
    cutoff: float = None,
    n: int = 500,
    check_cutoff: bool = True,
) -> list[float]:
    """Trimer energies with the energy-dependent narrow-resonance T-matrix.

    R* regulates the short-distance physics, so results must be cutoff
    independent; with ``check_cutoff`` each level is re-solved at twice the
    cutoff and a >1% drift raises ConvergenceError.
    """
    if not r_star > 0:
        raise ValueError("r_star must be positive")
    if cutoff is None:
        cutoff = 100.0 / r_star

    def solve(lam):
        return solve_trimers_zero_range(
            a, lam, E_window, n=n, r_star=r_star, n_scan=300, p_min_factor=1e-8
        )

    roots = solve(cutoff)
    if check_cutoff:
        roots2 = solve(2.0 * cutoff)
        for E, E2 in zip(roots, roots2):
            if abs(E2 - E) > 0.01 * abs(E):
                raise ConvergenceError(
                    f"cutoff drift {abs(E2 - E) / abs(E):.2%} at E = {E:g}"
                )
    return roots


@dataclass(frozen=True)
class SeparableKernel:
    """Rank-one separable STM kernel with numerically projected s wave.

    M(E) = diag[1/(4 pi a) - I(P)] + K with
    I(P) = (1/(2 pi^2)) int dq phi(q)^2 kap^2/(q^2+kap^2), kap^2 = 3P^2/4 - E,
    K(P,Q) = (1/(2 pi^2)) w_Q Q^2 int dc phi(q1) phi(q2)/(P^2+Q^2+PQc-E),
    q1 = |Q + P/2|, q2 = |P + Q/2|.
    """

    form: FormFactor
    inv_a: float
    n: int = 260
    n_ang: int = _DEF_NANG
    p_min: float = None
    _tables: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        if self.p_min is None:
            object.__setattr__(self, "p_min", 2.5e-6 * self.form.p_max)

    def _build(self):
        if self._tables:
            return
        rule = gauss_legendre_log(self.n, self.p_min, self.form.p_max)
        p, wp = rule.nodes, rule.weights
        ang = gauss_legendre(self.n_ang, -1.0, 1.0)
        c, wc = ang.nodes, ang.weights
        P = p[:, None, None]
        Q = p[None, :, None]
        C = c[None, None, :]
        q1 = np.sqrt(Q * Q + 0.25 * P * P + P * Q * C)
        q2 = np.sqrt(P * P + 0.25 * Q * Q + P * Q * C)
        dim = gauss_legendre_log(3000, 1e-6, 2.2 * self.form.p_max)
        self._tables.update(
            p=p, wp=wp, c=c, wc=wc, P=P, Q=Q, C=C,
            ph12=self.form(q1) * self.form(q2),
            qd=dim.nodes, wd=dim.weights, phd2=self.form(dim.nodes) ** 2,
        )

    def dimer_integral(self, E: float) -> np.ndarray:
        """I(P) over the momentum grid."""
        self._build()
        t = self._tables
        kap2 = 0.75 * t["p"] ** 2 - E
        return (
            (t["phd2"][None, :] * kap2[:, None] / (t["qd"][None, :] ** 2 + kap2[:, None]))
            @ t["wd"]
        ) / (2 * np.pi**2)

    def matrix(self, E: float, homogeneous: bool = False) -> np.ndarray:
        """M(E); with ``homogeneous`` the 1/a diagonal term is dropped
        (threshold eigenproblem form)."""
        self._build()
        t = self._tables
        den = t["P"] ** 2 + t["Q"] ** 2 + t["P"] * t["Q"] * t["C"] - E
        angsum = np.sum(t["wc"][None, None, :] * t["ph12"] / den, axis=2)
        K = (1.0 / (2 * np.pi**2)) * t["wp"][None, :] * t["p"][None, :] ** 2 * angsum
        I = self.dimer_integral(E)
        D = (0.0 if homogeneous else self.inv_a / (4 * np.pi)) - I
        return np.diag(D) + K


def solve_trimers_separable(
    form: FormFactor,
    a: float = None,
    E_window: tuple[float, float] = (-3.0, -1e-7),
    n: int = 260,
    n_ang: int = _DEF_NANG,
    n_scan: int = 200,
) -> list[float]:
    """Trimer energies for a separable model, deepest first.

    ``a`` defaults to the scattering length the form factor was built for.
    """
    inv_a = form.inv_a if a is None else (0.0 if np.isinf(a) else 1.0 / a)
    kern = SeparableKernel(form, inv_a, n=n, n_ang=n_ang)

    def det(E):
        return float(np.linalg.slogdet(kern.matrix(E))[0])

    roots = _scan_roots(det, E_window, n_scan)
    _warn_resolution(roots, n / math.log10(form.p_max / kern.p_min))
    return roots


def threshold_scattering_lengths(
    source,
    n_max: int = 4,
    r_star: float = 0.0,
    cutoff: float = None,
    n: int = 500,
    return_rejected: bool = False,
):
    """Dissociation scattering lengths a_-^(n) < 0 where trimer n meets the
    three-body threshold, smallest |a_-| (deepest level) first.

    ``source`` is a cutoff (zero-range / narrow-resonance kernel) or a
    FormFactor.  1/a enters the E = 0 kernel linearly, so the a_-^(n) are
    eigenvalues; roots with |a_-| * cutoff <= 10 sit at the regularization
    scale and are filtered out (returned separately on request).
    """
    if isinstance(source, FormFactor):
        kern = SeparableKernel(source, 0.0, n=min(n, 300))
        # M = diag(1/(4 pi a) - I) + K = 0  =>  (1/a) eigvals of -4 pi (K - diag I)
        ev = _real_eigvals(-4 * np.pi * kern.matrix(0.0, homogeneous=True))
        scale = source.p_max
    else:
        lam = float(source) if cutoff is None else cutoff
        kern = StmKernel(0.0, lam, r_star=r_star, n=n, p_min_factor=1e-8)
        ev = _real_eigvals(kern.threshold_matrix())
        scale = lam
    neg = np.sort(ev[ev < 0])  # most negative first -> smallest |a|
    a_all = 1.0 / neg
    keep = np.abs(a_all) * scale > 10.0
    accepted = list(a_all[keep][:n_max])
    if return_rejected:
        return accepted, list(a_all[~keep])
    return accepted


def a_minus_ground(
    form_family,
    bracket: tuple[float, float],
    E_floor: float = -1e-6,
    n: int = 200,
    n_ang: int = 32,
    rel_tol: float = 1e-3,
) -> float:
    """Ground-level dissociation length a_-^(0) for an a-dependent
    form-factor family (callable 1/a -> FormFactor).

    The kernel itself depends on a here, so a_- is found by bisecting the
    existence of a trimer below ``E_floor`` between the two bracket
    scattering lengths (both < 0; |lo| without state, |hi| with)."""
    lo, hi = bracket
    if not (lo < 0 and hi < 0 and abs(lo) < abs(hi)):
        raise ValueError("bracket must be (a_without, a_with), both negative")

    def has_state(a):
        form = form_family(1.0 / a)
        lev = solve_trimers_separable(
            form, a, (min(-3.0, 100 * E_floor), E_floor), n=n, n_ang=n_ang, n_scan=90
        )
        return bool(lev)

    if has_state(lo) or not has_state(hi):
        raise ValueError("bracket does not straddle the threshold")
    while abs(hi - lo) > rel_tol * abs(lo):
        mid = 0.5 * (lo + hi)
        if has_state(mid):
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def narrow_resonance_a_star0(
    r_star: float,
    bracket: tuple[float, float] = (1.8, 2.6),
    n: int = 400,
    rel_tol: float = 1e-4,
) -> float:
    """a_*^(0): scattering length where the ground narrow-resonance trimer
    meets the particle-dimer threshold (a > 0), in units set by R*.

    The dimer pole sits at kappa_d = (-1 + sqrt(1 + 4 R*/a))/(2 R*); the
    gap E_0 - E_dimer is bisected in 1/a over ``bracket`` (given in units
    of 1/R*)."""
    if not r_star > 0:
        raise ValueError("r_star must be positive")
    cutoff = 100.0 / r_star

    def gap(inv_a):
        kd = (-1.0 + math.sqrt(1.0 + 4.0 * r_star * inv_a)) / (2.0 * r_star)
        Ed = -kd * kd
        lev = solve_trimers_zero_range(
            1.0 / inv_a, cutoff, (1e4 * Ed, Ed * (1 + 1e-10)),
            n=n, r_star=r_star, n_scan=200, p_min_factor=1e-8,
        )
        # levels below the dimer were already filtered against -1/a^2 only;
        # keep those below the narrow-resonance dimer itself
        lev = [E for E in lev if E < Ed]
        return (lev[0] - Ed) if lev else 1.0

    lo, hi = (b / r_star for b in bracket)
    if not (gap(lo) < 0 and gap(hi) > 0):
        raise ValueError("bracket does not straddle the dimer crossing")
    while hi - lo > rel_tol * lo:
        mid = 0.5 * (lo + hi)
        if gap(mid) < 0:
            lo = mid
        else:
            hi = mid
    return 2.0 / (lo + hi)


def kappa_star_extrapolated(energies, level: int = 0) -> float:
    """kappa*^(level) * lambda0^level: the three-body parameter read off one
    level of a finite-range spectrum, mapped to the reference level by the
    discrete scaling; energies ordered deepest first."""
    E = energies[level]
    if not E < 0:
        raise ValueError("energies must be negative")
    return math.sqrt(-E) * LAMBDA0**level


# ---------------------------------------------------------------------------
# two-channel triton model


@dataclass(frozen=True)
class TritonModel:
    """Coupled triplet/singlet nucleon model with potential-shape form
    factors from a sech^2 well fitted to each channel's (a, r_e).

    Lengths in fm; ``hbar2_over_m`` converts natural energies (fm^-2) to
    MeV.  The fitted well parameters and the achieved (a, r_e) residuals
    are stored for inspection.
    """

    a_t: float = 5.4112
    r_et: float = 1.7436
    a_s: float = -23.7148
    r_es: float = 2.750
    hbar2_over_m: float = 41.46
    lambda_t: float = None
    b_t: float = None
    lambda_s: float = None
    b_s: float = None
    fit_residual: float = None

    @classmethod
    def fit(cls, a_t=5.4112, r_et=1.7436, a_s=-23.7148, r_es=2.750, hbar2_over_m=41.46):
        """Fit (lambda, b) of V = -lambda(lambda+1)/b^2 sech^2(r/b) per
        channel: lambda sets the shape ratio r_e/a, then b sets the scale."""
        out = {}
        resid = 0.0
        for tag, (a, re, lo, hi) in {
            "t": (a_t, r_et, 1.05, 1.9),
            "s": (a_s, r_es, 0.3, 0.999),
        }.items():

            def shape(lam, _target=re / a):
                st = solve_zero_energy(
                    TwoBodyModel("poschl_teller", {"lambda": lam, "range": 1.0})
                )
                return st.r_e * st.inv_a - _target

            lam = find_root(shape, lo, hi, tol=1e-12)
            st = solve_zero_energy(
                TwoBodyModel("poschl_teller", {"lambda": lam, "range": 1.0})
            )
            b = a * st.inv_a  # scale b so that a comes out exactly
            chk = solve_zero_energy(
                TwoBodyModel("poschl_teller", {"lambda": lam, "range": b})
            )
            resid = max(
                resid,
                abs(chk.inv_a * a - 1.0),
                abs(chk.r_e / re - 1.0),
            )
            out[tag] = (lam, b)
        if resid > 1e-3:
            raise ConvergenceError(f"channel fit residual {resid:.1e} exceeds 0.1%")
        return cls(
            a_t, r_et, a_s, r_es, hbar2_over_m,
            lambda_t=out["t"][0], b_t=out["t"][1],
            lambda_s=out["s"][0], b_s=out["s"][1],
            fit_residual=resid,
        )

    def form_factors(self, p_max: float = 40.0) -> tuple[FormFactor, FormFactor]:
        if self.lambda_t is None:
            raise ValueError("model not fitted; use TritonModel.fit()")
        out = []
        for lam, b in ((self.lambda_t, self.b_t), (self.lambda_s, self.b_s)):
            st = solve_zero_energy(
                TwoBodyModel("poschl_teller", {"lambda": lam, "range": b})
            )
            out.append(est_form_factor(st, p_max=p_max))
        return tuple(out)

    @property
    def deuteron_energy(self) -> float:
        """Effective-range T-matrix pole of the triplet channel, in MeV."""
        kap = (1.0 - math.sqrt(1.0 - 2.0 * self.r_et / self.a_t)) / self.r_et
        return self.hbar2_over_m * kap**2


@dataclass(frozen=True)
class TritonResult:
    deuteron: float  # MeV, effective-range pole
    deuteron_separable: float  # MeV, dimer pole of the triplet form factor
    trimers: tuple  # MeV, deepest first
    inputs: dict


def _triton_det_factory(
    model: TritonModel,
    inv_at: float,
    inv_as: float,
    n: int,
    n_ang: int,
    p_max: float,
    p_min: float,
    boson_mode: bool = False,
):
    ff_t, ff_s = model.form_factors(p_max)
    if boson_mode:
        ff_s, inv_as = ff_t, inv_at
    rule = gauss_legendre_log(n, p_min, p_max)
    p, wp = rule.nodes, rule.weights
    ang = gauss_legendre(n_ang, -1.0, 1.0)
    c, wc = ang.nodes, ang.weights
    P = p[:, None, None]
    Q = p[None, :, None]
    C = c[None, None, :]
    q1 = np.sqrt(Q * Q + 0.25 * P * P + P * Q * C)
    q2 = np.sqrt(P * P + 0.25 * Q * Q + P * Q * C)
    ft1, fs1 = ff_t(q1), ff_s(q1)
    ft2, fs2 = ff_t(q2), ff_s(q2)
    dim = gauss_legendre_log(3000, 1e-4 * p_min, 2.2 * p_max)
    qd, wd = dim.nodes, dim.weights
    pt2, ps2 = ff_t(qd) ** 2, ff_s(qd) ** 2

    def det(E):
        den = P * P + Q * Q + P * Q * C - E
        pref = (1.0 / np.pi) * wp[None, :] * p[None, :] ** 2
        Ktt = pref * np.sum(wc * ft1 * ft2 / den, axis=2)
        Kts = pref * np.sum(wc * ft1 * fs2 / den, axis=2)
        Kst = pref * np.sum(wc * fs1 * ft2 / den, axis=2)
        Kss = pref * np.sum(wc * fs1 * fs2 / den, axis=2)
        kap2 = 0.75 * p**2 - E
        It = ((pt2[None, :] * kap2[:, None] / (qd[None, :] ** 2 + kap2[:, None])) @ wd) * (
            2 / np.pi
        )
        Is = ((ps2[None, :] * kap2[:, None] / (qd[None, :] ** 2 + kap2[:, None])) @ wd) * (
            2 / np.pi
        )
        # antisymmetry of the spin-isospin recoupling: 1/2 same-channel,
        # 3/2 cross-channel exchange weights
        M = np.block(
            [
                [np.diag(inv_at - It) + 0.5 * Ktt, 1.5 * Kts],
                [1.5 * Kst, np.diag(inv_as - Is) + 0.5 * Kss],
            ]
        )
        return float(np.linalg.slogdet(M)[0])

    return det, (ff_t, ff_s)


def solve_triton(
    model: TritonModel,
    E_window: tuple[float, float] = None,
    n: int = 300,
    n_ang: int = _DEF_NANG,
    p_max: float = 40.0,
) -> TritonResult:
    """Bound states of the coupled triplet/singlet spectator equations.

    Energies in MeV; the trimer search runs below the deuteron.  The
    deuteron itself is quoted from the effective-range pole of the triplet
    T-matrix (the separable form factor's own pole is reported alongside
    as a model diagnostic).
    """
    from .two_body import TMatrixModel, dimer_energy

    h2m = model.hbar2_over_m
    if E_window is None:
        E_window = (-0.5, -1.02 * model.deuteron_energy / h2m)
    det, (ff_t, ff_s) = _triton_det_factory(
        model, 1.0 / model.a_t, 1.0 / model.a_s, n, n_ang, p_max, 1e-4
    )
    roots = _scan_roots(det, E_window, 120)
    Ed_sep = dimer_energy(TMatrixModel("separable", form=ff_t))
    return TritonResult(
        deuteron=model.deuteron_energy,
        deuteron_separable=-h2m * Ed_sep,
        trimers=tuple(h2m * E for E in roots),
        inputs={
            "a_t": model.a_t, "r_et": model.r_et,
            "a_s": model.a_s, "r_es": model.r_es,
            "n": n, "n_ang": n_ang, "p_max": p_max,
        },
    )


def solve_triton_unitarity(
    model: TritonModel,
    n: int = 240,
    n_ang: int = 32,
    p_max: float = 40.0,
    E_window: tuple[float, float] = (-0.5, -1e-9),
) -> list[float]:
    """Two-channel spectrum with both inverse scattering lengths set to
    zero (natural units, fm^-2); exposes the boson-like scaling ratio."""
    det, _ = _triton_det_factory(model, 0.0, 0.0, n, n_ang, p_max, 1e-6)
    return _scan_roots(det, E_window, 260)


def solve_boson_reference(
    model: TritonModel,
    inv_a: float,
    n: int = 240,
    n_ang: int = 32,
    p_max: float = 40.0,
    E_window: tuple[float, float] = (-0.5, -1e-9),
) -> list[float]:
    """One-channel boson spectrum using the triplet form factor in the
    two-channel assembly with identical channels; by construction equals
    the separable boson solver (reduction cross-check)."""
    det, _ = _triton_det_factory(
        model, inv_a, inv_a, n, n_ang, p_max, 1e-6, boson_mode=True
    )
    return _scan_roots(det, E_window, 260)


def reconstruct_wavefunction(kernel: SeparableKernel, E: float):
    """Three-body amplitude Psi(P_vec, p_vec) at a trimer energy.

    The spectator amplitude F is the null vector of M(E); the full
    amplitude sums the three exchange images,
    Psi = -[sum_i F(P_i) phi(p_i)] / ((3/4)P^2 + p^2 - E),
    which is symmetric under the bosonic Jacobi momentum rotations.
    """
    from .numerics import smallest_eigenvalue

    if E >= 0:
        raise ValueError("need E < 0")
    val, vec = smallest_eigenvalue(kernel.matrix(E))
    kernel._build()
    p = kernel._tables["p"]
    if abs(val) > 1e-6 * np.max(np.abs(kernel.matrix(E))):
        warnings.warn("E is not an eigenenergy; amplitude is approximate", stacklevel=2)
    if vec[np.argmax(np.abs(vec))] < 0:
        vec = -vec
    spl = CubicSpline(np.log(p), vec, extrapolate=False)
    form = kernel.form

    def F(P):
        out = spl(np.log(np.maximum(P, p[0])))
        return np.nan_to_num(out, nan=0.0)

    def psi(P_vec, p_vec):
        P_vec = np.asarray(P_vec, dtype=float)
        p_vec = np.asarray(p_vec, dtype=float)
        pairs = [
            (P_vec, p_vec),
            (-0.5 * P_vec - p_vec, 0.75 * P_vec - 0.5 * p_vec),
            (-0.5 * P_vec + p_vec, -0.75 * P_vec - 0.5 * p_vec),
        ]
        num = 0.0
        for Pv, pv in pairs:
            num += F(np.linalg.norm(Pv, axis=-1)) * form(np.linalg.norm(pv, axis=-1))
        den = 0.75 * np.sum(P_vec**2, axis=-1) + np.sum(p_vec**2, axis=-1) - E
        return -num / den

    return psi
