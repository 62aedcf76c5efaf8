"""Parameter records and algebraic structure of the cubic Lienard oscillator.

The oscillator is

    x'' + k x x' + omega^2 x + (k^2 / 9) x^3 = 0,

a linearly-damped-looking equation whose damping coefficient f(x) = k x and
restoring force g(x) = omega^2 x + (k^2/9) x^3 satisfy g/f = a x^2 + b with
a = k/9 and b = omega^2/k.  That ratio being quadratic is what makes the
whole construction work: it admits exactly two multiplier exponents eta
(roots of 2 eta^2 + 9 eta + 9 = 0, namely -3 and -3/2), each of which yields
a Lagrangian, a Hamiltonian, and ultimately a solvable quantum problem.

Everything in this module is closed-form bookkeeping: no integration or
matrix work happens here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = [
    "DomainError",
    "LienardParams",
    "SolutionParams",
    "EtaBranch",
    "AmbiguityParams",
    "QuantumSetup",
    "damping",
    "restoring",
    "restoring_over_damping",
    "solve_eta_quadratic",
    "eta_branch",
    "check_constraint",
    "ambiguity_for_epsilon",
    "derive_ell",
    "setup_for_ell",
]

#: Coefficients (p, q, r) of the exponent condition p*eta^2 + q*eta + r = 0.
ETA_QUADRATIC = (2.0, 9.0, 9.0)


class DomainError(ValueError):
    """A quantity left the real domain of a fractional power or square root."""


@dataclass(frozen=True)
class LienardParams:
    """Couplings of the oscillator.

    ``k`` is the damping strength (nonzero, may be negative), ``omega`` the
    linear frequency (positive).  The derived ratio coefficients ``a`` and
    ``b`` are stored nowhere; they are single-rounding quotients of the
    couplings, so ``a * 9 == k`` holds exactly whenever ``k/9`` is exact
    (k = 1, 9, 18, ...) and to one ulp otherwise.
    """

    k: float
    omega: float

    def __post_init__(self) -> None:
        if not math.isfinite(self.k) or self.k == 0.0:
            raise ValueError(f"damping strength k must be finite and nonzero, got {self.k}")
        if not (math.isfinite(self.omega) and self.omega > 0.0):
            raise ValueError(f"frequency omega must be positive, got {self.omega}")

    @property
    def a(self) -> float:
        """Cubic coefficient of g/f: a = k/9."""
        return self.k / 9.0

    @property
    def b(self) -> float:
        """Constant coefficient of g/f: b = omega^2/k."""
        return self.omega**2 / self.k


def damping(x, params: LienardParams):
    """Velocity coefficient f(x) = k x."""
    return params.k * x


def restoring(x, params: LienardParams):
    """Restoring force g(x) = omega^2 x + (k^2/9) x^3."""
    ksq_9 = params.k * params.k / 9.0
    return params.omega**2 * x + ksq_9 * x**3


def restoring_over_damping(x, params: LienardParams):
    """The quadratic ratio g(x)/f(x) = a x^2 + b, defined for all x."""
    return params.a * x * x + params.b


@dataclass(frozen=True)
class SolutionParams:
    """Amplitude and phase of the closed-form periodic orbit.

    The orbit x(t) = A sin(omega t + delta) / (1 - r cos(omega t + delta))
    exists for |r| < 1 where r = k A / (3 omega).  ``A = 0`` is allowed and
    gives the rest state.
    """

    A: float
    delta: float = 0.0

    def amplitude_ratio(self, params: LienardParams) -> float:
        """The orbit parameter r = k A / (3 omega)."""
        return params.k * self.A / (3.0 * params.omega)

    def validate_for(self, params: LienardParams) -> None:
        """Raise DomainError unless the orbit is globally bounded (|r| < 1)."""
        r = self.amplitude_ratio(params)
        if not abs(r) < 1.0:
            raise DomainError(
                f"orbit parameter |kA/(3 omega)| = {abs(r)} >= 1: denominator vanishes"
            )


@dataclass(frozen=True)
class EtaBranch:
    """One admissible multiplier exponent together with its flow constant.

    ``eta`` must be an exact root of 2 eta^2 + 9 eta + 9 = 0; both roots
    (-3.0 and -1.5) are exactly representable, so the check is an equality,
    not a tolerance.  ``nu = eta * b`` is the additive constant entering the
    first-order reformulation x' = u + nu + eta a x^2.
    """

    eta: float
    nu: float

    def __post_init__(self) -> None:
        p, q, r = ETA_QUADRATIC
        if p * self.eta * self.eta + q * self.eta + r != 0.0:
            raise ValueError(f"eta = {self.eta} is not a root of {p} eta^2 + {q} eta + {r} = 0")

    @property
    def momentum_scale(self) -> float:
        """Factor eta + 1 relating canonical momentum p to ptilde = (eta+1) p."""
        return self.eta + 1.0


def solve_eta_quadratic(params: LienardParams) -> tuple[EtaBranch, EtaBranch]:
    """Both branches of the exponent condition, ordered (eta=-3, eta=-3/2).

    The discriminant of 2 eta^2 + 9 eta + 9 is 81 - 72 = 9, so the roots
    (-9 +- 3)/4 are exact in floating point.
    """
    p, q, r = ETA_QUADRATIC
    root = math.sqrt(q * q - 4.0 * p * r)
    lo = (-q - root) / (2.0 * p)
    hi = (-q + root) / (2.0 * p)
    return (
        EtaBranch(eta=lo, nu=lo * params.b),
        EtaBranch(eta=hi, nu=hi * params.b),
    )


def eta_branch(params: LienardParams, eta: float) -> EtaBranch:
    """Select the branch with the given exponent (-3 or -1.5)."""
    for branch in solve_eta_quadratic(params):
        if branch.eta == eta:
            return branch
    raise ValueError(f"eta must be -3 or -1.5, got {eta}")


def check_constraint(params: LienardParams, eta, x: float) -> float:
    """Residual of the compatibility condition tying g/f to the exponent.

    For the multiplier ansatz to close, (g/f)' must equal
    -(1/eta)(1/eta + 1) f, i.e.

        2 a x + (1/eta)(1/eta + 1) k x = 0   for all x != 0.

    Returns the left-hand side at ``x``.  It vanishes identically for the
    two admissible exponents and is nonzero for any other value, so this
    doubles as a tamper check: ``eta`` may be a raw float, not only an
    EtaBranch.
    """
    e = eta.eta if isinstance(eta, EtaBranch) else float(eta)
    if e == 0.0:
        raise ValueError("eta must be nonzero")
    if x == 0.0:
        raise ValueError("the condition is trivial at x = 0; evaluate at x != 0")
    inv = 1.0 / e
    return 2.0 * params.a * x + inv * (inv + 1.0) * damping(x, params)


@dataclass(frozen=True)
class AmbiguityParams:
    """Operator-ordering exponents (alpha, beta, gamma) of the kinetic term.

    The position-dependent-mass kinetic operator orders m^alpha p m^beta p
    m^gamma with alpha + beta + gamma = -1.  For the 1/ptilde mass profile
    the spectrum depends on the exponents only through

        epsilon = -4 alpha (alpha + beta + 1).

    The conventional symmetric choice (0, -1, 0) gives epsilon = 0.
    """

    alpha: float
    beta: float
    gamma: float

    def __post_init__(self) -> None:
        total = self.alpha + self.beta + self.gamma
        if abs(total + 1.0) > 1e-12:
            raise ValueError(f"ordering exponents must sum to -1, got {total}")

    @property
    def epsilon(self) -> float:
        # + 0.0 keeps the default ordering from reporting -0.0.
        return -4.0 * self.alpha * (self.alpha + self.beta + 1.0) + 0.0


def default_ordering() -> AmbiguityParams:
    """The (0, -1, 0) ordering: mass sits between the two momenta."""
    return AmbiguityParams(alpha=0.0, beta=-1.0, gamma=0.0)


def ambiguity_for_epsilon(epsilon: float) -> AmbiguityParams:
    """Some ordering realizing a requested epsilon.

    The map (alpha, beta) -> epsilon is onto the reals; this picks the
    default ordering for epsilon = 0 and alpha = 1, beta = -2 - epsilon/4
    otherwise.  Only epsilon matters downstream.
    """
    if epsilon == 0.0:
        return default_ordering()
    alpha = 1.0
    beta = -2.0 - epsilon / 4.0
    gamma = -1.0 - alpha - beta
    return AmbiguityParams(alpha=alpha, beta=beta, gamma=gamma)


@dataclass(frozen=True)
class QuantumSetup:
    """Everything the half-line eigenproblem needs: couplings, ordering, index.

    The centrifugal index ell satisfies

        ell (ell + 1) = epsilon - 1/4 + 96 / k,

    which the constructor verifies; build instances through ``derive_ell``
    or ``setup_for_ell`` rather than by hand.
    """

    params: LienardParams
    ambiguity: AmbiguityParams
    ell: float

    def __post_init__(self) -> None:
        lhs = self.ell * (self.ell + 1.0)
        rhs = self.ambiguity.epsilon - 0.25 + 96.0 / self.params.k
        if abs(lhs - rhs) > 1e-9 * max(1.0, abs(rhs)):
            raise ValueError(
                f"ell = {self.ell} inconsistent with couplings: "
                f"ell(ell+1) = {lhs}, epsilon - 1/4 + 96/k = {rhs}"
            )
        if not lhs > -0.25:
            raise DomainError(f"ell(ell+1) = {lhs} <= -1/4: no real centrifugal index")

    @property
    def centrifugal_strength(self) -> float:
        """Coefficient ell(ell+1) of the 1/y^2 barrier."""
        return self.ell * (self.ell + 1.0)


def derive_ell(
    ambiguity: AmbiguityParams, params: LienardParams, *, branch: str = "+"
) -> QuantumSetup:
    """Solve ell(ell+1) = epsilon - 1/4 + 96/k for ell.

    ``branch`` picks the root: "+" gives ell = -1/2 + sqrt(epsilon + 96/k)
    (the one with a normalizable y^(ell+1) behaviour at the origin for
    k > 0), "-" the mirror ell -> -(ell+1).
    """
    radicand = ambiguity.epsilon + 96.0 / params.k
    if radicand <= 0.0:
        raise DomainError(
            f"epsilon + 96/k = {radicand} <= 0: centrifugal index is complex"
        )
    root = math.sqrt(radicand)
    if branch == "+":
        ell = -0.5 + root
    elif branch == "-":
        ell = -0.5 - root
    else:
        raise ValueError(f"branch must be '+' or '-', got {branch!r}")
    return QuantumSetup(params=params, ambiguity=ambiguity, ell=ell)


def setup_for_ell(
    ell: float, omega: float, *, ambiguity: AmbiguityParams | None = None
) -> QuantumSetup:
    """Choose the damping strength k that realizes a requested index ell.

    Inverts the index relation: k = 96 / (ell(ell+1) + 1/4 - epsilon).
    With the default ordering, ell = 0 needs k = 384 and ell = 1/2 needs
    k = 96.
    """
    if ambiguity is None:
        ambiguity = default_ordering()
    denom = ell * (ell + 1.0) + 0.25 - ambiguity.epsilon
    if denom == 0.0:
        raise DomainError(f"no finite k realizes ell = {ell} at epsilon = {ambiguity.epsilon}")
    k = 96.0 / denom
    return QuantumSetup(params=LienardParams(k=k, omega=omega), ambiguity=ambiguity, ell=ell)
