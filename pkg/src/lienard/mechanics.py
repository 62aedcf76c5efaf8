"""Lagrangian and Hamiltonian structure on the two exponent branches.

Each admissible exponent eta carries a Lagrangian with velocity-dependent
kinetic prefactor, its conjugate momentum, and a Hamiltonian that is more
naturally written in the scaled momentum ptilde = (eta + 1) p.  On the
eta = -3 branch the Hamiltonian collapses to a shifted-oscillator normal
form; on eta = -3/2 it is an isotonic-type Hamiltonian with a mass that
depends on momentum instead of position.  Both generate the same
second-order dynamics, which is what makes the pair a genuine
bi-Hamiltonian description.

All fractional powers require a positive base; crossing zero raises
DomainError rather than silently going complex.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .classical import solve_rk45
from .model import (
    DomainError,
    EtaBranch,
    LienardParams,
    restoring_over_damping,
)
from .specfun import fd_derivative

__all__ = [
    "PhasePoint",
    "PhaseFlow",
    "MassPotential",
    "lagrangian",
    "conjugate_momentum",
    "ptilde_from_velocity",
    "velocity_from_momentum",
    "hamiltonian_general",
    "hamiltonian_harmonic_form",
    "hamiltonian_isotonic",
    "dH_dx",
    "dH_dptilde",
    "dH_dx_fd",
    "dH_dptilde_fd",
    "mass_potential",
    "potential_minimum",
    "phase_point_from_velocity",
    "hamilton_flow",
    "legendre_residual",
]


@dataclass(frozen=True)
class PhasePoint:
    """A canonical pair (x, p).  Note p, not the scaled ptilde."""

    x: float
    p: float


def _base(x, xdot, branch: EtaBranch, params: LienardParams):
    """The quantity (x' - W) every fractional power is built from."""
    base = np.asarray(xdot, dtype=float) - branch.eta * restoring_over_damping(x, params)
    if np.any(base <= 0.0):
        raise DomainError(
            f"x' - W must stay positive on the eta = {branch.eta} branch"
        )
    return base


def lagrangian(x, xdot, branch: EtaBranch, params: LienardParams):
    """L = (x' - W)^(eta+2) / ((eta+1)(eta+2)) on the given branch.

    For eta = -3 this is 1/(2(x' - W)); for eta = -3/2 it is
    -4 sqrt(x' - W).  Defined where x' > W.
    """
    e = branch.eta
    return _base(x, xdot, branch, params) ** (e + 2.0) / ((e + 1.0) * (e + 2.0))


def conjugate_momentum(x, xdot, branch: EtaBranch, params: LienardParams):
    """p = dL/dx' = (x' - W)^(eta+1) / (eta+1)."""
    e = branch.eta
    return _base(x, xdot, branch, params) ** (e + 1.0) / (e + 1.0)


def ptilde_from_velocity(x, xdot, branch: EtaBranch, params: LienardParams):
    """The scaled momentum ptilde = (eta+1) p = (x' - W)^(eta+1); positive."""
    return _base(x, xdot, branch, params) ** (branch.eta + 1.0)


def _require_positive_ptilde(ptilde):
    pt = np.asarray(ptilde, dtype=float)
    if np.any(pt <= 0.0):
        raise DomainError("ptilde must be positive on both physical branches")
    return pt


def velocity_from_momentum(x, p, branch: EtaBranch, params: LienardParams):
    """Invert the momentum map: x' = W + ptilde^(1/(eta+1))."""
    e = branch.eta
    pt = _require_positive_ptilde((e + 1.0) * np.asarray(p, dtype=float))
    return branch.eta * restoring_over_damping(x, params) + pt ** (1.0 / (e + 1.0))


def hamiltonian_general(x, ptilde, branch: EtaBranch, params: LienardParams):
    """H = ptilde^((eta+2)/(eta+1)) / (eta+2) + (eta/(eta+1)) ptilde (a x^2 + b).

    The single expression valid on both branches; the specialized forms
    below are algebraic rewritings of it.
    """
    e = branch.eta
    pt = _require_positive_ptilde(ptilde)
    ratio = restoring_over_damping(x, params)
    return pt ** ((e + 2.0) / (e + 1.0)) / (e + 2.0) + (e / (e + 1.0)) * pt * ratio


def hamiltonian_harmonic_form(x, ptilde, params: LienardParams):
    """The eta = -3 Hamiltonian arranged as a shifted oscillator.

    (3 a ptilde) x^2 / 2 + (3b/2) (sqrt(ptilde) - 1/(3b))^2 - 1/(6b):
    at fixed ptilde a harmonic well in x, with the momentum entering
    through sqrt(ptilde).  Numerically identical to ``hamiltonian_general``
    on the eta = -3 branch (zero offset), which the tests pin down.
    """
    pt = _require_positive_ptilde(ptilde)
    a, b = params.a, params.b
    spread = np.sqrt(pt) - 1.0 / (3.0 * b)
    return 1.5 * a * pt * np.asarray(x, dtype=float) ** 2 + 1.5 * b * spread**2 - 1.0 / (6.0 * b)


def hamiltonian_isotonic(x, ptilde, params: LienardParams):
    """The eta = -3/2 Hamiltonian: 3 a ptilde x^2 + 3 b ptilde + 2/ptilde.

    Kinetic term x^2/(2 m(ptilde)) with mass m = 1/(6 a ptilde), plus a
    momentum-space potential with a single minimum: an isotonic profile
    with the roles of position and momentum exchanged.
    """
    pt = _require_positive_ptilde(ptilde)
    a, b = params.a, params.b
    return 3.0 * a * pt * np.asarray(x, dtype=float) ** 2 + 3.0 * b * pt + 2.0 / pt


def dH_dx(x, ptilde, branch: EtaBranch, params: LienardParams):
    """Analytic dH/dx = (eta/(eta+1)) 2 a x ptilde."""
    pt = _require_positive_ptilde(ptilde)
    e = branch.eta
    return (e / (e + 1.0)) * 2.0 * params.a * np.asarray(x, dtype=float) * pt


def dH_dptilde(x, ptilde, branch: EtaBranch, params: LienardParams):
    """Analytic dH/dptilde = ptilde^(1/(eta+1)) / (eta+1) + (eta/(eta+1)) (a x^2 + b)."""
    pt = _require_positive_ptilde(ptilde)
    e = branch.eta
    return pt ** (1.0 / (e + 1.0)) / (e + 1.0) + (e / (e + 1.0)) * restoring_over_damping(
        x, params
    )


def dH_dx_fd(x: float, ptilde: float, branch: EtaBranch, params: LienardParams) -> float:
    """Finite-difference audit of dH_dx (five-point stencil)."""
    return fd_derivative(lambda xx: float(hamiltonian_general(xx, ptilde, branch, params)), x)


def dH_dptilde_fd(x: float, ptilde: float, branch: EtaBranch, params: LienardParams) -> float:
    """Finite-difference audit of dH_dptilde; step kept inside ptilde > 0."""
    h = min(1e-5, 0.25 * ptilde)
    return fd_derivative(
        lambda pp: float(hamiltonian_general(x, pp, branch, params)), ptilde, h=h
    )


@dataclass(frozen=True)
class MassPotential:
    """Momentum-dependent mass and potential of the isotonic branch."""

    mass: Callable[[np.ndarray], np.ndarray]
    potential: Callable[[np.ndarray], np.ndarray]


def mass_potential(params: LienardParams) -> MassPotential:
    """m(ptilde) = 1/(6 a ptilde) and U(ptilde) = 3 b ptilde + 2/ptilde."""
    a, b = params.a, params.b

    def mass(ptilde):
        pt = _require_positive_ptilde(ptilde)
        return 1.0 / (6.0 * a * pt)

    def potential(ptilde):
        pt = _require_positive_ptilde(ptilde)
        return 3.0 * b * pt + 2.0 / pt

    return MassPotential(mass=mass, potential=potential)


def potential_minimum(params: LienardParams) -> tuple[float, float]:
    """Location and value of the minimum of U: (sqrt(2/(3b)), 2 sqrt(6b)).

    Only defined for b > 0 (i.e. k > 0), where U is convex on the half-line.
    """
    b = params.b
    if b <= 0.0:
        raise DomainError(f"potential has no interior minimum for b = {b} <= 0")
    return math.sqrt(2.0 / (3.0 * b)), 2.0 * math.sqrt(6.0 * b)


def phase_point_from_velocity(
    x: float, xdot: float, branch: EtaBranch, params: LienardParams
) -> PhasePoint:
    """Map (x, x') to the canonical pair (x, p) on a branch."""
    return PhasePoint(x=x, p=float(conjugate_momentum(x, xdot, branch, params)))


@dataclass(frozen=True)
class PhaseFlow:
    """Sampled Hamiltonian flow in canonical coordinates on one branch."""

    t: np.ndarray
    x: np.ndarray
    p: np.ndarray
    branch: EtaBranch
    params: LienardParams

    @property
    def ptilde(self) -> np.ndarray:
        return (self.branch.eta + 1.0) * self.p

    @property
    def xdot(self) -> np.ndarray:
        return velocity_from_momentum(self.x, self.p, self.branch, self.params)

    @property
    def energy(self) -> np.ndarray:
        return hamiltonian_general(self.x, self.ptilde, self.branch, self.params)


def hamilton_flow(
    initial: PhasePoint,
    branch: EtaBranch,
    params: LienardParams,
    t_end: float,
    *,
    rtol: float = 1e-11,
    atol: float = 1e-13,
    samples: int = 1024,
) -> PhaseFlow:
    """Integrate x' = dH/dp, p' = -dH/dx from t = 0 with uniform sampling.

    Derivatives with respect to the canonical p are chained through
    ptilde = (eta+1) p.  The flow stops with an error if ptilde is driven
    to zero, which cannot happen from a state on a bounded orbit.
    """
    if samples < 2:
        raise ValueError("samples must be at least 2")
    e = branch.eta

    def f(t: float, y: np.ndarray) -> np.ndarray:
        x, p = y
        pt = (e + 1.0) * p
        xdot = (e + 1.0) * dH_dptilde(x, pt, branch, params)
        pdot = -dH_dx(x, pt, branch, params)
        return np.array([float(xdot), float(pdot)])

    t_eval = np.linspace(0.0, t_end, samples)
    ts, ys = solve_rk45(
        f, 0.0, [initial.x, initial.p], t_end, rtol=rtol, atol=atol, t_eval=t_eval
    )
    return PhaseFlow(t=ts, x=ys[:, 0], p=ys[:, 1], branch=branch, params=params)


def legendre_residual(x, xdot, branch: EtaBranch, params: LienardParams):
    """H(x, p(x, x')) + L(x, x') - p x'; identically zero where defined."""
    p = conjugate_momentum(x, xdot, branch, params)
    pt = (branch.eta + 1.0) * np.asarray(p, dtype=float)
    H = hamiltonian_general(x, pt, branch, params)
    L = lagrangian(x, xdot, branch, params)
    return H + L - p * np.asarray(xdot, dtype=float)
