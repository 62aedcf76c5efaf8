"""Acceptance gate: ten numbered criteria, one summary line each.

Every test computes its residuals first, records a PASS/FAIL line for the
run summary, then asserts.  Criterion 7 documents a known physical
limitation of its pinned grid window (see the test docstring); it is left
to fail honestly rather than being weakened.
"""

import math

import numpy as np
import pytest

from lienard.classical import (
    TrajectoryState,
    exact_ptilde,
    exact_x,
    exact_xdot,
    first_order_flow,
    jlm_residual,
    lienard_trajectory,
    nonlocal_state,
    ode_residual_exact,
    pbar_from_ptilde,
    period,
    phase_conic_residual,
    w_of,
)
from lienard.mechanics import (
    hamilton_flow,
    hamiltonian_general,
    lagrangian,
    legendre_residual,
    phase_point_from_velocity,
)
from lienard.model import LienardParams, SolutionParams, setup_for_ell, solve_eta_quadratic
from lienard.specfun import Tridiagonal, eig_tridiagonal, hyp1f1
from lienard.spectral import (
    RadialGrid,
    analytic_wavefunction,
    compute_spectrum,
    count_nodes,
    numeric_eigenfunction,
    overlap,
    printed_level,
    vonroos_residual,
)

PARAMS = LienardParams(k=1.0, omega=1.0)
SOL = SolutionParams(A=1.0, delta=0.0)


def _record(log, num, ok, detail):
    line = "[criterion {:02d}] {:4s} {}".format(num, "PASS" if ok else "FAIL", detail)
    log.append(line)
    print(line)
    return line


def _initial_state():
    return (
        float(exact_x(0.0, PARAMS, SOL)),
        float(exact_xdot(0.0, PARAMS, SOL)),
    )


def test_criterion_01_exact_orbit_residual(acceptance_log):
    t = np.linspace(0.0, period(PARAMS), 4097)
    worst = float(np.max(np.abs(ode_residual_exact(t, PARAMS, SOL))))
    ok = worst < 1e-8
    _record(
        acceptance_log, 1, ok,
        f"closed-form orbit solves the oscillator equation: max residual {worst:.2e} < 1e-08",
    )
    assert ok


def test_criterion_02_two_hamiltonian_flows_one_trajectory(acceptance_log):
    x0, v0 = _initial_state()
    t_end = 2.0 * math.pi
    direct = lienard_trajectory(
        PARAMS, TrajectoryState(t=0.0, x=x0, xdot=v0), t_end, samples=1024
    )
    sups = []
    for branch in solve_eta_quadratic(PARAMS):
        flow = hamilton_flow(
            phase_point_from_velocity(x0, v0, branch, PARAMS),
            branch, PARAMS, t_end, samples=1024,
        )
        sups.append(float(np.max(np.abs(flow.x - direct.x))))
    ok = max(sups) < 1e-6
    _record(
        acceptance_log, 2, ok,
        "both canonical flows retrace the directly integrated path: "
        f"sup deviations {sups[0]:.2e}, {sups[1]:.2e} < 1e-06",
    )
    assert ok


def test_criterion_03_energy_conservation(acceptance_log):
    t = np.linspace(0.0, period(PARAMS), 1025)
    branches = solve_eta_quadratic(PARAMS)
    h_exact = hamiltonian_general(
        exact_x(t, PARAMS, SOL), exact_ptilde(t, PARAMS, SOL), branches[1], PARAMS
    )
    drifts = [float((h_exact.max() - h_exact.min()) / abs(h_exact.mean()))]
    x0, v0 = _initial_state()
    for branch in branches:
        flow = hamilton_flow(
            phase_point_from_velocity(x0, v0, branch, PARAMS),
            branch, PARAMS, period(PARAMS), samples=1024,
        )
        e = flow.energy
        drifts.append(float((e.max() - e.min()) / abs(e.mean())))
    ok = max(drifts) < 1e-9
    _record(
        acceptance_log, 3, ok,
        f"energy constant along exact pair and numeric flows: drifts {max(drifts):.2e} < 1e-09",
    )
    assert ok


def test_criterion_04_phase_plane_conic(acceptance_log):
    t = np.linspace(0.0, period(PARAMS), 1025)
    res_exact = float(np.max(np.abs(phase_conic_residual(
        exact_x(t, PARAMS, SOL),
        pbar_from_ptilde(exact_ptilde(t, PARAMS, SOL), PARAMS, SOL),
        PARAMS, SOL,
    ))))
    x0, v0 = _initial_state()
    iso = solve_eta_quadratic(PARAMS)[1]
    flow = hamilton_flow(
        phase_point_from_velocity(x0, v0, iso, PARAMS),
        iso, PARAMS, period(PARAMS), samples=1024,
    )
    res_num = float(np.max(np.abs(phase_conic_residual(
        flow.x, pbar_from_ptilde(flow.ptilde, PARAMS, SOL), PARAMS, SOL
    ))))
    ok = res_exact < 1e-10 and res_num < 1e-8
    _record(
        acceptance_log, 4, ok,
        f"conic invariant of the momentum orbit: exact {res_exact:.2e} < 1e-10, "
        f"numeric {res_num:.2e} < 1e-08",
    )
    assert ok


def test_criterion_05_multiplier_rate(acceptance_log):
    x0, v0 = _initial_state()
    worsts = []
    for branch in solve_eta_quadratic(PARAMS):
        flow = first_order_flow(
            nonlocal_state(x0, v0, branch, PARAMS), branch, PARAMS,
            period(PARAMS), samples=2048,
        )
        worsts.append(float(np.max(np.abs(jlm_residual(flow)))))
    ok = max(worsts) < 1e-6
    _record(
        acceptance_log, 5, ok,
        "log-rate of the multiplier equals the damping along both flows: "
        f"max residuals {worsts[0]:.2e}, {worsts[1]:.2e} < 1e-06",
    )
    assert ok


def test_criterion_06_legendre_identity(acceptance_log):
    rng = np.random.default_rng(7)
    worst = 0.0
    for branch in solve_eta_quadratic(PARAMS):
        for _ in range(100):
            x = float(rng.uniform(-1.8, 1.8))
            xdot = w_of(x, branch, PARAMS) + float(np.exp(rng.uniform(-2.0, 1.5)))
            worst = max(worst, abs(legendre_residual(x, xdot, branch, PARAMS)))
            # the identity is only meaningful where L is defined at all
            lagrangian(x, xdot, branch, PARAMS)
    ok = worst < 1e-10
    _record(
        acceptance_log, 6, ok,
        f"H + L - p xdot vanishes on 100 random states per branch: max {worst:.2e} < 1e-10",
    )
    assert ok


def test_criterion_07_pinned_window_spectrum(acceptance_log):
    """Six levels on the fixed window [1e-3, 12] with 6000 points.

    Three clauses: relative errors below 1e-4, measured refinement order
    2.0 +/- 0.1, and the shifted level ladder {0.75, 1.75, ...} must be
    rejected.  The error clause cannot be met on this window: a Dirichlet
    wall at y_min = 1e-3 offsets every barrier-free level by about
    |phi'(0)|^2 y_min ~ 2.26e-3 in energy units (7.5e-4 relative for the
    ground state), independent of the step size.  The order and rejection
    clauses hold; the offset is a property of the boxed continuum problem,
    not of this implementation, so the clause is left failing rather than
    loosened.  The same comparison on a window whose inner edge sits at
    1e-6 passes with a wide margin (see the eigenfunction criterion).
    """
    setup = setup_for_ell(0.0, 1.0)
    fine = compute_spectrum(setup, RadialGrid(1e-3, 12.0, 6000), levels=6)
    rel = np.abs(fine.numeric - fine.analytic) / fine.analytic
    errors_ok = bool(np.max(rel) < 1e-4)

    grounds = [
        compute_spectrum(setup, RadialGrid(1e-3, 12.0, n), levels=1).numeric[0]
        for n in (1500, 3000, 6000)
    ]
    order = math.log2((grounds[0] - grounds[1]) / (grounds[1] - grounds[2]))
    order_ok = 1.9 <= order <= 2.1

    printed = np.array([printed_level(n, setup) for n in range(6)])
    printed_dev = float(np.max(np.abs(fine.numeric - printed) / printed))
    printed_rejected = printed_dev > 1e-4

    ok = errors_ok and order_ok and printed_rejected
    if errors_ok:
        error_note = "ok"
    else:
        error_note = (
            "BAD: hard-wall offset at the pinned inner edge, "
            "step-size independent; see test docstring"
        )
    _record(
        acceptance_log, 7, ok,
        f"pinned-window levels: refinement order {order:.3f} in [1.9, 2.1] "
        f"({'ok' if order_ok else 'BAD'}); shifted ladder rejected, deviation "
        f"{printed_dev:.2f} ({'ok' if printed_rejected else 'BAD'}); relative errors "
        f"{np.min(rel):.1e}..{np.max(rel):.1e} vs 1e-4 ({error_note})",
    )
    assert order_ok, f"refinement order {order} outside [1.9, 2.1]"
    assert printed_rejected, "shifted level ladder was not rejected"
    assert errors_ok, (
        f"relative errors {rel.tolist()} exceed 1e-4 on the pinned window; "
        "the inner wall at 1e-3 offsets the levels by ~2.3e-3 regardless of grid"
    )


def test_criterion_08_eigenfunction_overlaps_and_nodes(acceptance_log):
    setup = setup_for_ell(0.0, 1.0)
    grid = RadialGrid(1e-6, 12.0, 6000)
    spectrum = compute_spectrum(setup, grid, levels=4)
    deficits, nodes_ok = [], True
    for n in range(4):
        wf = analytic_wavefunction(n, setup, grid)
        _, phi_num = numeric_eigenfunction(
            setup, grid, n, eigenvalue=float(spectrum.numeric[n])
        )
        deficits.append(1.0 - abs(overlap(wf.phi, phi_num, grid.points)))
        nodes_ok = nodes_ok and count_nodes(phi_num) == n
    ok = max(deficits) < 1e-6 and nodes_ok
    _record(
        acceptance_log, 8, ok,
        "closed-form vs iterated eigenvectors, four lowest levels: max overlap "
        f"deficit {max(deficits):.2e} < 1e-06, node counts "
        f"{'match' if nodes_ok else 'MISMATCH'}",
    )
    assert ok


def test_criterion_09_ordered_operator_residual(acceptance_log):
    setup = setup_for_ell(0.0, 1.0)
    residuals = [vonroos_residual(n, setup) for n in range(4)]
    base = residuals[0]
    alt1 = vonroos_residual(0, setup, alpha=0.0, beta=-0.25)
    alt2 = vonroos_residual(0, setup, alpha=0.7, beta=-1.7)
    invariance = max(abs(alt1 - base), abs(alt2 - base))
    ok = max(residuals) < 1e-4 and invariance < 1e-7
    _record(
        acceptance_log, 9, ok,
        "variable-mass operator annihilates the mapped eigenfunctions: max "
        f"residual {max(residuals):.2e} < 1e-04, ordering invariance {invariance:.2e}",
    )
    assert ok


def test_criterion_10_special_function_oracles(acceptance_log):
    worst = 0.0
    # exponential case
    for z in (-2.0, 0.3, 1.7):
        worst = max(worst, abs(hyp1f1(1.0, 1.0, z) / math.exp(z) - 1.0))
    # two-term polynomial
    for z in (0.4, 2.2):
        worst = max(worst, abs(hyp1f1(-1.0, 2.5, z) - (1.0 - z / 2.5)))
    # contiguous relation between neighbouring parameters
    for a, b, z in [(0.7, 1.9, 0.6), (-1.5, 2.5, 1.1)]:
        lhs = b * (hyp1f1(a, b, z) - hyp1f1(a - 1.0, b, z))
        worst = max(worst, abs(lhs - z * hyp1f1(a, b + 1.0, z)))
    # Laguerre proportionality through the three-term recurrence
    for n, aa, z in [(3, 0.5, 1.2), (5, 1.5, 2.0)]:
        l0, l1 = 1.0, 1.0 + aa - z
        for m in range(1, n):
            l0, l1 = l1, ((2 * m + 1 + aa - z) * l1 - (m + aa) * l0) / (m + 1)
        binom = math.gamma(n + aa + 1) / (math.gamma(n + 1.0) * math.gamma(aa + 1.0))
        worst = max(worst, abs(binom * hyp1f1(-float(n), aa + 1.0, z) - l1))
    series_ok = worst < 1e-10

    rng = np.random.default_rng(2024)
    eig_worst = 0.0
    for _ in range(3):
        T = Tridiagonal(diag=rng.standard_normal(50), off=rng.standard_normal(49))
        dense = np.diag(T.diag) + np.diag(T.off, 1) + np.diag(T.off, -1)
        ref = np.sort(np.linalg.eigvalsh(dense))[:6]
        eig_worst = max(eig_worst, float(np.max(np.abs(eig_tridiagonal(T, 6) - ref))))
    eig_ok = eig_worst < 1e-10

    ok = series_ok and eig_ok
    _record(
        acceptance_log, 10, ok,
        f"series identities within {worst:.2e} of zero (< 1e-10); eigensolver vs "
        f"reference within {eig_worst:.2e} (< 1e-10) on random 50x50 instances",
    )
    assert ok
