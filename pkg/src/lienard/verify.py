"""Cross-checks between the closed forms and the numerics, as a named report.

Each check compares two independent routes to the same quantity and
records a residual against a fixed threshold.  The collection is what the
command-line ``verify`` subcommand serializes; the acceptance tests reuse
individual checks directly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import classical, mechanics
from .model import LienardParams, SolutionParams, check_constraint, solve_eta_quadratic

__all__ = ["Check", "VerificationReport", "run_verification"]


@dataclass(frozen=True)
class Check:
    name: str
    residual: float
    threshold: float

    @property
    def passed(self) -> bool:
        return self.residual < self.threshold

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "residual": self.residual,
            "threshold": self.threshold,
            "passed": self.passed,
        }


@dataclass(frozen=True)
class VerificationReport:
    checks: tuple[Check, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> tuple[Check, ...]:
        return tuple(c for c in self.checks if not c.passed)

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "n_checks": len(self.checks),
            "n_failed": len(self.failures),
            "checks": [c.to_dict() for c in self.checks],
        }


def _relative_spread(values: np.ndarray) -> float:
    return float((np.max(values) - np.min(values)) / abs(np.mean(values)))


def run_verification(
    params: LienardParams,
    sol: SolutionParams,
    *,
    samples: int = 1024,
    eta_override: float | None = None,
) -> VerificationReport:
    """Run the full battery for one bounded orbit.

    ``eta_override`` substitutes a raw exponent into the compatibility-
    condition checks in place of the true roots; anything but -3 or -3/2
    makes those checks fail, which is exactly the point (it demonstrates
    the report cannot be satisfied vacuously).
    """
    sol.validate_for(params)
    checks: list[Check] = []
    branches = solve_eta_quadratic(params)
    t_span = classical.period(params)
    t = np.linspace(0.0, t_span, samples)

    # the closed-form orbit solves the equation of motion
    resid = np.max(np.abs(classical.ode_residual_exact(t, params, sol)))
    checks.append(Check("exact_solution_residual", float(resid), 1e-8))

    # and returns to its initial state after one period
    x0 = float(classical.exact_x(0.0, params, sol))
    v0 = float(classical.exact_xdot(0.0, params, sol))
    xT = float(classical.exact_x(t_span, params, sol))
    vT = float(classical.exact_xdot(t_span, params, sol))
    checks.append(
        Check("exact_periodicity", max(abs(xT - x0), abs(vT - v0)), 1e-10)
    )

    # the exponent condition holds identically on both branches
    x_probe = np.linspace(0.1, 2.0, 40)
    if eta_override is None:
        constraint_etas = [(f"{b.eta:g}", b.eta) for b in branches]
    else:
        constraint_etas = [(f"{eta_override:g}", eta_override)]
    for label, eta in constraint_etas:
        worst = max(abs(check_constraint(params, eta, float(xx))) for xx in x_probe)
        checks.append(Check(f"exponent_condition_eta_{label}", worst, 1e-12))

    for branch in branches:
        label = f"{branch.eta:g}"
        init = classical.nonlocal_state(x0, v0, branch, params)
        flow = classical.first_order_flow(
            init, branch, params, t_span, samples=samples
        )

        # multiplier identity: d/dt log u^eta follows the damping coefficient
        jlm = float(np.max(np.abs(classical.jlm_residual(flow))))
        checks.append(Check(f"multiplier_rate_eta_{label}", jlm, 1e-6))

        # the two formulations trace the same configuration path
        direct = classical.lienard_trajectory(
            params, classical.TrajectoryState(0.0, x0, v0), t_span, samples=samples
        )
        gap = float(np.max(np.abs(flow.x - direct.x)))
        checks.append(Check(f"bihamiltonian_match_eta_{label}", gap, 1e-6))

        # Legendre pairing closes on random phase points
        rng = np.random.default_rng(7)
        worst_leg = 0.0
        for _ in range(100):
            xx = float(rng.uniform(-1.5, 1.5))
            uu = float(rng.uniform(0.2, 3.0))
            vv = uu + classical.w_of(xx, branch, params)
            worst_leg = max(
                worst_leg,
                abs(float(mechanics.legendre_residual(xx, vv, branch, params))),
            )
        checks.append(Check(f"legendre_identity_eta_{label}", worst_leg, 1e-10))

    # energy stays flat along the closed-form pair ...
    iso = branches[1]
    pt_exact = classical.exact_ptilde(t, params, sol)
    x_exact = classical.exact_x(t, params, sol)
    H_exact = mechanics.hamiltonian_general(x_exact, pt_exact, iso, params)
    checks.append(Check("energy_exact_pair", _relative_spread(H_exact), 1e-9))

    # ... and along the numerically integrated canonical flow
    start = mechanics.phase_point_from_velocity(x0, v0, iso, params)
    ham = mechanics.hamilton_flow(start, iso, params, t_span, samples=samples)
    checks.append(Check("energy_flow", _relative_spread(ham.energy), 1e-9))

    # the phase-plane conic is traced exactly by the closed-form pair
    pbar = classical.pbar_from_ptilde(pt_exact, params, sol)
    conic = np.max(np.abs(classical.phase_conic_residual(x_exact, pbar, params, sol)))
    checks.append(Check("conic_exact_pair", float(conic), 1e-10))

    # and to integrator accuracy by the flow
    pbar_flow = classical.pbar_from_ptilde(ham.ptilde, params, sol)
    conic_flow = np.max(np.abs(classical.phase_conic_residual(ham.x, pbar_flow, params, sol)))
    checks.append(Check("conic_flow", float(conic_flow), 1e-8))

    return VerificationReport(checks=tuple(checks))
