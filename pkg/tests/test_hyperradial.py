import math

import numpy as np
import pytest

from efimov.channels import LAMBDA0, S0, ThreeBodySystem, s2_lowest
from efimov.hyperradial import (
    HyperradialChannel,
    adiabatic_spectrum,
    solve_bound_states,
    three_body_phase,
)
from efimov.numerics import ConvergenceError


@pytest.fixture(scope="module")
def wall_states():
    chan = HyperradialChannel(R0=1.0)
    return solve_bound_states(chan, (1e-5, 1.0))


def test_spectrum_geometric(wall_states):
    E = np.asarray(wall_states.energies)
    assert len(E) >= 3
    ratios = E[:-1] / E[1:]
    assert ratios == pytest.approx([LAMBDA0**2] * len(ratios), rel=3e-3)


def test_energies_ordered_and_nodes_count_up(wall_states):
    E = list(wall_states.energies)
    assert E == sorted(E)
    assert wall_states.node_counts() == list(range(len(E)))


def test_kappas_negative_below_threshold(wall_states):
    kap = wall_states.kappas
    assert np.all(kap < 0)
    assert np.asarray(wall_states.energies) == pytest.approx(-(kap**2))


def test_discrete_scale_invariance_under_wall_scaling(wall_states):
    scaled = solve_bound_states(
        HyperradialChannel(R0=LAMBDA0), (1e-5 / LAMBDA0, 1.0 / LAMBDA0)
    )
    E_ref = np.asarray(wall_states.energies)
    E_scl = np.asarray(scaled.energies) * LAMBDA0**2
    m = min(len(E_ref), len(E_scl))
    assert E_scl[:m] == pytest.approx(E_ref[:m], rel=1e-8)


def test_phase_of_hard_wall(wall_states):
    # hard wall at R0 = reference scale: v ~ sin(s0 ln(R/R0)), phase pi/2
    phi = three_body_phase(wall_states, reference_scale=1.0)
    assert phi == pytest.approx(math.pi / 2, abs=1e-10)


def test_phase_log_periodic_in_wall_position():
    phi1 = three_body_phase(HyperradialChannel(R0=1.0))
    phi2 = three_body_phase(HyperradialChannel(R0=LAMBDA0))
    diff = abs(phi1 - phi2) % math.pi
    assert min(diff, math.pi - diff) < 1e-6


def test_phase_shifts_with_reference_scale():
    phi1 = three_body_phase(HyperradialChannel(R0=1.0), reference_scale=1.0)
    s = 1.7
    phi2 = three_body_phase(HyperradialChannel(R0=1.0), reference_scale=s)
    expect = (phi1 - S0 * math.log(s)) % math.pi
    assert phi2 == pytest.approx(expect, abs=1e-8)


def test_phase_rejects_running_exponent():
    chan = HyperradialChannel(s_squared=lambda R: s2_lowest(-0.3 * R), R0=1.0)
    with pytest.raises(ConvergenceError):
        three_body_phase(chan)


def test_log_derivative_boundary():
    chan = HyperradialChannel(R0=1.0, boundary="log_derivative", boundary_value=0.5)
    states = solve_bound_states(chan, (1e-4, 1.0))
    E = np.asarray(states.energies)
    assert len(E) >= 3
    # the deepest level feels the boundary; the shallower pair is geometric
    assert E[1] / E[2] == pytest.approx(LAMBDA0**2, rel=3e-3)


def test_channel_validation():
    with pytest.raises(ValueError):
        HyperradialChannel(R0=-1.0)
    with pytest.raises(ValueError):
        HyperradialChannel(boundary="open")
    with pytest.raises(ValueError):
        solve_bound_states(HyperradialChannel(), (0.5, 0.1))


def test_adiabatic_scan_negative_a_removes_levels():
    spec = adiabatic_spectrum(
        ThreeBodySystem(), [-0.05, 0.0], R0=1.0, kappa_window=(5e-4, 0.5)
    )
    at_res = spec.column("inv_a") == 0.0
    off_res = spec.column("inv_a") == -0.05
    # finite negative a cuts off the shallowest states
    assert np.count_nonzero(off_res) < np.count_nonzero(at_res)
    assert np.all(spec.column("energy") < 0)
    assert spec.metadata["approximation"] == "single-channel adiabatic"


def test_adiabatic_scan_positive_a_binds_below_dimer():
    inv_a = 0.2
    spec = adiabatic_spectrum(
        ThreeBodySystem(), [inv_a], R0=1.0, kappa_window=(5e-3, 0.5)
    )
    assert len(spec.rows) >= 1
    # trimers sit below the dimer threshold -1/a^2
    assert np.all(spec.column("energy") < -(inv_a**2))


def test_adiabatic_scan_bosons_only():
    with pytest.raises(NotImplementedError):
        adiabatic_spectrum(
            ThreeBodySystem(statistics="fermions"), [0.0], 1.0, (1e-3, 1.0)
        )
