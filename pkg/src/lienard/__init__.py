"""Exact dynamics and dual Hamiltonian structure of a cubic Lienard oscillator.

The equation x'' + k x x' + omega^2 x + (k^2/9) x^3 = 0 is special: it has a
closed-form periodic orbit, two inequivalent Lagrangian descriptions built
from a velocity-dependent multiplier, and a momentum-space quantization with
a momentum-dependent mass whose spectrum is that of an isotonic oscillator.
This package implements all of it, with every closed form cross-checked
numerically by an independent route.

Layout: ``model`` (parameters and algebra), ``classical`` (orbits and
integrators), ``mechanics`` (Lagrangians and the Hamiltonian pair),
``specfun`` (numerical kernels), ``spectral`` (the half-line eigenproblem),
``verify`` (the cross-check battery), ``cli`` / ``figures`` (reporting).
"""

from .model import (
    AmbiguityParams,
    DomainError,
    EtaBranch,
    LienardParams,
    QuantumSetup,
    SolutionParams,
    ambiguity_for_epsilon,
    default_ordering,
    derive_ell,
    eta_branch,
    setup_for_ell,
    solve_eta_quadratic,
)
from .classical import (
    IntegrationError,
    Trajectory,
    TrajectoryState,
    exact_ptilde,
    exact_x,
    exact_xdot,
    lienard_trajectory,
    period,
)
from .mechanics import (
    PhasePoint,
    hamilton_flow,
    hamiltonian_general,
    hamiltonian_isotonic,
    lagrangian,
    phase_point_from_velocity,
)
from .spectral import (
    RadialGrid,
    analytic_wavefunction,
    compute_spectrum,
    numeric_eigenfunction,
)
from .verify import run_verification

__version__ = "0.1.0"
