"""Lagrangian/Hamiltonian layer: transforms, flows, conserved quantities."""

import math

import numpy as np
import pytest

from lienard.classical import (
    exact_ptilde,
    exact_x,
    exact_xdot,
    pbar_from_ptilde,
    period,
    phase_conic_residual,
)
from lienard.mechanics import (
    PhasePoint,
    conjugate_momentum,
    dH_dptilde,
    dH_dptilde_fd,
    dH_dx,
    dH_dx_fd,
    hamilton_flow,
    hamiltonian_general,
    hamiltonian_harmonic_form,
    hamiltonian_isotonic,
    lagrangian,
    legendre_residual,
    mass_potential,
    phase_point_from_velocity,
    potential_minimum,
    ptilde_from_velocity,
    velocity_from_momentum,
)
from lienard.model import DomainError, LienardParams


def _random_states(params, branches, rng, n=60):
    """States with the velocity safely above the branch drift term."""
    from lienard.classical import w_of

    out = []
    for _ in range(n):
        x = float(rng.uniform(-1.8, 1.8))
        branch = branches[int(rng.integers(0, 2))]
        xdot = w_of(x, branch, params) + float(np.exp(rng.uniform(-2.0, 1.5)))
        out.append((x, xdot, branch))
    return out


def test_velocity_below_drift_rejected(params, branches):
    from lienard.classical import w_of

    for branch in branches:
        w = w_of(0.5, branch, params)
        with pytest.raises(DomainError):
            lagrangian(0.5, w - 0.1, branch, params)


def test_momentum_velocity_round_trip(params, branches, rng):
    for x, xdot, branch in _random_states(params, branches, rng):
        p = conjugate_momentum(x, xdot, branch, params)
        back = velocity_from_momentum(x, p, branch, params)
        assert back == pytest.approx(xdot, rel=1e-12)
        assert ptilde_from_velocity(x, xdot, branch, params) > 0.0


def test_legendre_identity_on_random_states(params, branches, rng):
    worst = 0.0
    for x, xdot, branch in _random_states(params, branches, rng, n=100):
        worst = max(worst, abs(legendre_residual(x, xdot, branch, params)))
    assert worst < 1e-12


def test_special_hamiltonian_forms_equal_general(params, branches, rng):
    harm, iso = branches
    for _ in range(40):
        x = float(rng.uniform(-1.5, 1.5))
        pt = float(np.exp(rng.uniform(-1.5, 1.5)))
        h_gen = hamiltonian_general(x, pt, harm, params)
        assert hamiltonian_harmonic_form(x, pt, params) == pytest.approx(
            h_gen, rel=1e-12, abs=1e-12
        )
        g_gen = hamiltonian_general(x, pt, iso, params)
        assert hamiltonian_isotonic(x, pt, params) == pytest.approx(
            g_gen, rel=1e-12, abs=1e-12
        )


def test_hamilton_gradients_match_finite_differences(params, branches, rng):
    for branch in branches:
        for _ in range(20):
            x = float(rng.uniform(-1.2, 1.2))
            pt = float(np.exp(rng.uniform(-1.0, 1.0)))
            assert dH_dx(x, pt, branch, params) == pytest.approx(
                dH_dx_fd(x, pt, branch, params), rel=1e-6, abs=1e-8
            )
            assert dH_dptilde(x, pt, branch, params) == pytest.approx(
                dH_dptilde_fd(x, pt, branch, params), rel=1e-6, abs=1e-8
            )


def test_mass_falls_off_with_momentum(params):
    mp = mass_potential(params)
    assert mp.mass(2.0) == pytest.approx(1.0 / (6.0 * params.a * 2.0), rel=1e-14)
    assert mp.mass(1.0) > mp.mass(4.0) > 0.0
    # potential: linear confinement plus a repulsive 2/pt wall
    assert mp.potential(0.01) > mp.potential(1.0)


def test_potential_minimum_location_and_value(params):
    pt_min, u_min = potential_minimum(params)
    assert pt_min == pytest.approx(math.sqrt(2.0 / (3.0 * params.b)), rel=1e-13)
    assert u_min == pytest.approx(2.0 * math.sqrt(6.0 * params.b), rel=1e-13)
    mp = mass_potential(params)
    # scan around the reported minimum
    pts = np.linspace(0.3 * pt_min, 3.0 * pt_min, 4001)
    vals = np.array([mp.potential(p) for p in pts])
    assert abs(pts[np.argmin(vals)] - pt_min) < pts[1] - pts[0]
    assert np.min(vals) >= u_min - 1e-12


def test_potential_minimum_needs_positive_restoring_ratio():
    with pytest.raises(DomainError):
        potential_minimum(LienardParams(k=-1.0, omega=1.0))


# ----------------------------------------------------------------------
# flows
# ----------------------------------------------------------------------


def _initial_point(params, sol, branch):
    x0 = float(exact_x(0.0, params, sol))
    v0 = float(exact_xdot(0.0, params, sol))
    return phase_point_from_velocity(x0, v0, branch, params)


def test_hamilton_flows_reproduce_orbit(params, sol, branches):
    for branch in branches:
        flow = hamilton_flow(
            _initial_point(params, sol, branch), branch, params, period(params),
            samples=512,
        )
        assert np.max(np.abs(flow.x - exact_x(flow.t, params, sol))) < 1e-9


def test_energy_constant_along_flow_and_exact_pair(params, sol, branches):
    t = np.linspace(0.0, period(params), 513)
    pt = exact_ptilde(t, params, sol)
    x = exact_x(t, params, sol)
    _, iso = branches
    h_exact = hamiltonian_general(x, pt, iso, params)
    spread = (h_exact.max() - h_exact.min()) / abs(h_exact.mean())
    assert spread < 1e-12
    for branch in branches:
        flow = hamilton_flow(
            _initial_point(params, sol, branch), branch, params, period(params),
            samples=512,
        )
        e = flow.energy
        assert (e.max() - e.min()) / abs(e.mean()) < 1e-12


def test_conserved_value_closed_form(params, sol, branches):
    # k = omega = A = 1 gives H = 6 / sqrt(4/3) = 3 sqrt(3)
    _, iso = branches
    x = exact_x(0.0, params, sol)
    pt = exact_ptilde(0.0, params, sol)
    assert hamiltonian_general(x, pt, iso, params) == pytest.approx(
        3.0 * math.sqrt(3.0), rel=1e-14
    )


def test_conic_lives_on_the_half_exponent_branch(params, sol, branches):
    """The phase-plane conic holds along the eta = -3/2 momentum chart and
    visibly fails along the eta = -3 one; the two charts are different maps
    of the same trajectory."""
    harm, iso = branches
    flow_iso = hamilton_flow(
        _initial_point(params, sol, iso), iso, params, period(params), samples=512
    )
    res_iso = phase_conic_residual(
        flow_iso.x, pbar_from_ptilde(flow_iso.ptilde, params, sol), params, sol
    )
    assert np.max(np.abs(res_iso)) < 1e-10
    flow_harm = hamilton_flow(
        _initial_point(params, sol, harm), harm, params, period(params), samples=512
    )
    res_harm = phase_conic_residual(
        flow_harm.x, pbar_from_ptilde(flow_harm.ptilde, params, sol), params, sol
    )
    assert np.max(np.abs(res_harm)) > 0.1


def test_phase_point_container():
    pt = PhasePoint(x=0.3, p=-1.2)
    assert pt.x == 0.3 and pt.p == -1.2
