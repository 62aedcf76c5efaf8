"""Time-domain side of the oscillator.

Closed-form periodic orbit with analytic derivatives, an adaptive
Dormand-Prince 5(4) integrator (plus a fixed-step RK4 cross-check), the
nonlocal first-order reformulation behind the multiplier construction, and
the diagnostics that compare all of these along a flow.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .model import (
    DomainError,
    EtaBranch,
    LienardParams,
    SolutionParams,
    damping,
    restoring,
    restoring_over_damping,
)
from .specfun import ConvergenceError, central_d1

__all__ = [
    "IntegrationError",
    "TrajectoryState",
    "Trajectory",
    "FirstOrderState",
    "FirstOrderFlow",
    "solve_rk45",
    "rk4_fixed",
    "lienard_rhs",
    "integrate",
    "lienard_trajectory",
    "exact_x",
    "exact_xdot",
    "exact_xddot",
    "ode_residual_exact",
    "period",
    "ptilde_radicand",
    "exact_ptilde",
    "pbar_from_ptilde",
    "phase_conic_residual",
    "w_of",
    "nonlocal_state",
    "first_order_flow",
    "jlm_residual",
    "fit_solution_params",
]


class IntegrationError(RuntimeError):
    """Adaptive integration failed; carries the last accepted state."""

    def __init__(self, message: str, t_last: float, y_last: np.ndarray):
        super().__init__(f"{message} (last accepted t = {t_last})")
        self.t_last = t_last
        self.y_last = y_last


# ----------------------------------------------------------------------
# Dormand-Prince 5(4) with step control
# ----------------------------------------------------------------------

_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
_C = (0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0)
_B5 = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
_B4 = np.array(
    [5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40]
)
_ERR = _B5 - _B4

_SAFETY = 0.9
_MIN_FACTOR = 0.2
_MAX_FACTOR = 5.0
_MAX_REJECTS = 30


def solve_rk45(
    f: Callable[[float, np.ndarray], np.ndarray],
    t0: float,
    y0,
    t_end: float,
    *,
    rtol: float = 1e-10,
    atol: float = 1e-12,
    t_eval: Sequence[float] | None = None,
    max_step: float = math.inf,
    first_step: float | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """Integrate y' = f(t, y) forward with the Dormand-Prince 5(4) pair.

    Error control is per-component, err_i / (atol + rtol max(|y_i|)), with
    the usual RMS acceptance test and step factor 0.9 err^(-1/5) limited to
    [0.2, 5].  The last stage is reused as the first of the next step.

    When ``t_eval`` is given (strictly increasing, inside [t0, t_end]),
    steps are shortened to land exactly on each requested time and only
    those samples are returned; otherwise every accepted step is returned.
    Sampling by step-clipping costs a few extra steps but avoids carrying a
    dense-output interpolant.

    Raises IntegrationError on step-size underflow, repeated rejection, or
    a right-hand side that leaves its domain; the exception records the
    last accepted state.
    """
    t = float(t0)
    y = np.atleast_1d(np.asarray(y0, dtype=float))
    if not t_end > t:
        raise ValueError(f"t_end = {t_end} must exceed t0 = {t0}")
    span = t_end - t

    targets: list[float] | None = None
    if t_eval is not None:
        targets = [float(s) for s in t_eval]
        if any(s2 <= s1 for s1, s2 in zip(targets, targets[1:])):
            raise ValueError("t_eval must be strictly increasing")
        if targets and (targets[0] < t0 or targets[-1] > t_end):
            raise ValueError("t_eval must lie within [t0, t_end]")

    ts: list[float] = []
    ys: list[np.ndarray] = []
    idx = 0
    if targets is not None:
        if idx < len(targets) and targets[idx] == t:
            ts.append(t)
            ys.append(y.copy())
            idx += 1
    else:
        ts.append(t)
        ys.append(y.copy())

    def rhs(tt: float, yy: np.ndarray) -> np.ndarray:
        try:
            return np.atleast_1d(np.asarray(f(tt, yy), dtype=float))
        except DomainError as exc:
            raise IntegrationError(f"right-hand side left its domain: {exc}", t, y) from exc

    k1 = rhs(t, y)
    h = first_step if first_step is not None else span / 100.0
    h = min(h, max_step, span)

    n_stages = 7
    while t < t_end:
        if h < 16.0 * np.finfo(float).eps * max(abs(t), 1.0):
            raise IntegrationError("step size underflow", t, y)
        goal: float | None = None
        if t_end - t <= h:
            h = t_end - t
            goal = t_end
        if targets is not None and idx < len(targets) and targets[idx] - t <= h:
            h = targets[idx] - t
            goal = targets[idx]

        rejects = 0
        while True:
            K = [k1]
            for i in range(1, n_stages - 1):
                yi = y + h * sum(aij * K[j] for j, aij in enumerate(_A[i]))
                K.append(rhs(t + _C[i] * h, yi))
            y_new = y + h * sum(aij * K[j] for j, aij in enumerate(_A[6]))
            k_last = rhs(t + h, y_new)
            K.append(k_last)

            err_vec = h * sum(e * K[j] for j, e in enumerate(_ERR))
            scale = atol + rtol * np.maximum(np.abs(y), np.abs(y_new))
            with np.errstate(invalid="ignore", over="ignore"):
                err = float(np.sqrt(np.mean((err_vec / scale) ** 2)))
            if math.isfinite(err) and np.all(np.isfinite(y_new)) and err <= 1.0:
                break
            rejects += 1
            if rejects > _MAX_REJECTS:
                raise IntegrationError("too many consecutive step rejections", t, y)
            factor = _MIN_FACTOR if not math.isfinite(err) else max(
                _MIN_FACTOR, _SAFETY * err ** -0.2
            )
            h *= min(factor, 1.0)
            goal = None
            if h < 16.0 * np.finfo(float).eps * max(abs(t), 1.0):
                raise IntegrationError("step size underflow during rejection", t, y)

        t = goal if goal is not None else t + h
        y = y_new
        k1 = k_last

        if targets is not None:
            if idx < len(targets) and t == targets[idx]:
                ts.append(t)
                ys.append(y.copy())
                idx += 1
            if idx >= len(targets):
                break
        else:
            ts.append(t)
            ys.append(y.copy())

        factor = _MAX_FACTOR if err == 0.0 else min(_MAX_FACTOR, _SAFETY * err ** -0.2)
        if rejects > 0:
            factor = min(factor, 1.0)
        h = min(h * factor, max_step)

    return np.array(ts), np.array(ys)


def rk4_fixed(
    f: Callable[[float, np.ndarray], np.ndarray],
    t0: float,
    y0,
    t_end: float,
    n_steps: int,
) -> tuple[np.ndarray, np.ndarray]:
    """Classical fixed-step RK4; the independent cross-check integrator."""
    if n_steps < 1:
        raise ValueError("n_steps must be positive")
    y = np.atleast_1d(np.asarray(y0, dtype=float))
    h = (t_end - t0) / n_steps
    ts = np.empty(n_steps + 1)
    ys = np.empty((n_steps + 1, y.size))
    ts[0] = t0
    ys[0] = y
    t = t0
    for i in range(n_steps):
        k1 = np.asarray(f(t, y), dtype=float)
        k2 = np.asarray(f(t + 0.5 * h, y + 0.5 * h * k1), dtype=float)
        k3 = np.asarray(f(t + 0.5 * h, y + 0.5 * h * k2), dtype=float)
        k4 = np.asarray(f(t + h, y + h * k3), dtype=float)
        y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        t = t0 + (i + 1) * h
        ts[i + 1] = t
        ys[i + 1] = y
    return ts, ys


# ----------------------------------------------------------------------
# second-order form
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class TrajectoryState:
    """A point (t, x, x') of the second-order flow."""

    t: float
    x: float
    xdot: float


@dataclass(frozen=True)
class Trajectory:
    """Sampled solution of the second-order equation."""

    t: np.ndarray
    x: np.ndarray
    xdot: np.ndarray

    def __len__(self) -> int:
        return self.t.size

    def state(self, i: int) -> TrajectoryState:
        return TrajectoryState(t=float(self.t[i]), x=float(self.x[i]), xdot=float(self.xdot[i]))


def lienard_rhs(state: TrajectoryState, params: LienardParams) -> float:
    """Acceleration x'' = -(k x x' + omega^2 x + (k^2/9) x^3)."""
    return -(damping(state.x, params) * state.xdot + restoring(state.x, params))


def integrate(
    accel: Callable[[TrajectoryState], float],
    initial: TrajectoryState,
    t_end: float,
    *,
    rtol: float = 1e-11,
    atol: float = 1e-13,
    samples: int = 1024,
) -> Trajectory:
    """Integrate x'' = accel(t, x, x') from ``initial`` up to ``t_end``.

    Samples are uniform in time, endpoints included.
    """
    if samples < 2:
        raise ValueError("samples must be at least 2")

    def f(t: float, y: np.ndarray) -> np.ndarray:
        return np.array([y[1], accel(TrajectoryState(t=t, x=y[0], xdot=y[1]))])

    t_eval = np.linspace(initial.t, t_end, samples)
    ts, ys = solve_rk45(
        f, initial.t, [initial.x, initial.xdot], t_end, rtol=rtol, atol=atol, t_eval=t_eval
    )
    return Trajectory(t=ts, x=ys[:, 0], xdot=ys[:, 1])


def lienard_trajectory(
    params: LienardParams, initial: TrajectoryState, t_end: float, **kwargs
) -> Trajectory:
    """Convenience wrapper: integrate the oscillator itself."""
    return integrate(lambda s: lienard_rhs(s, params), initial, t_end, **kwargs)


# ----------------------------------------------------------------------
# the closed-form orbit
# ----------------------------------------------------------------------


def exact_x(t, params: LienardParams, sol: SolutionParams):
    """Closed-form orbit x(t) = A sin(theta) / (1 - r cos(theta))."""
    sol.validate_for(params)
    r = sol.amplitude_ratio(params)
    theta = params.omega * np.asarray(t, dtype=float) + sol.delta
    return sol.A * np.sin(theta) / (1.0 - r * np.cos(theta))


def exact_xdot(t, params: LienardParams, sol: SolutionParams):
    """Analytic time derivative of the closed-form orbit."""
    sol.validate_for(params)
    r = sol.amplitude_ratio(params)
    theta = params.omega * np.asarray(t, dtype=float) + sol.delta
    denom = 1.0 - r * np.cos(theta)
    return sol.A * params.omega * (np.cos(theta) - r) / denom**2


def exact_xddot(t, params: LienardParams, sol: SolutionParams):
    """Analytic second derivative of the closed-form orbit."""
    sol.validate_for(params)
    r = sol.amplitude_ratio(params)
    theta = params.omega * np.asarray(t, dtype=float) + sol.delta
    c = np.cos(theta)
    denom = 1.0 - r * c
    return -sol.A * params.omega**2 * np.sin(theta) * (1.0 + r * c - 2.0 * r * r) / denom**3


def ode_residual_exact(t, params: LienardParams, sol: SolutionParams):
    """Plug the closed-form orbit into the equation of motion.

    Every factor is analytic, so the residual probes only the identity and
    floating-point cancellation, not any discretization.
    """
    x = exact_x(t, params, sol)
    v = exact_xdot(t, params, sol)
    acc = exact_xddot(t, params, sol)
    return acc + damping(x, params) * v + restoring(x, params)


def period(params: LienardParams) -> float:
    """All bounded orbits share the harmonic period 2 pi / omega."""
    return 2.0 * math.pi / params.omega


def ptilde_radicand(params: LienardParams, sol: SolutionParams) -> float:
    """The constant R = 3 omega^2/(2k) - k A^2/6 under the momentum orbit.

    Positive exactly when |r| < 1 (it equals omega A (1 - r^2) / (2 r)
    up to sign conventions for k < 0), so a bounded orbit always has a
    real momentum branch.
    """
    return 1.5 * params.omega**2 / params.k - params.k * sol.A**2 / 6.0


def exact_ptilde(t, params: LienardParams, sol: SolutionParams):
    """Scaled momentum along the closed-form orbit (eta = -3/2 branch).

    ptilde(t) = (1 - r cos(omega t + delta)) / sqrt(R) with R the constant
    from ``ptilde_radicand``; always positive on a bounded orbit.
    """
    sol.validate_for(params)
    R = ptilde_radicand(params, sol)
    if R <= 0.0:
        raise DomainError(f"momentum radicand R = {R} <= 0; no real momentum branch")
    r = sol.amplitude_ratio(params)
    theta = params.omega * np.asarray(t, dtype=float) + sol.delta
    return (1.0 - r * np.cos(theta)) / math.sqrt(R)


def pbar_from_ptilde(ptilde, params: LienardParams, sol: SolutionParams):
    """Rescale ptilde by sqrt(R) so the orbit's conic takes unit coefficients."""
    R = ptilde_radicand(params, sol)
    if R <= 0.0:
        raise DomainError(f"momentum radicand R = {R} <= 0; no real momentum branch")
    return np.asarray(ptilde, dtype=float) * math.sqrt(R)


def phase_conic_residual(x, pbar, params: LienardParams, sol: SolutionParams):
    """Residual of the ellipse traced in the (x, pbar) plane.

    Along any bounded orbit the pair satisfies

        (1 + (k x / 3 omega)^2) pbar^2 - 2 pbar + (1 - r^2) = 0,

    an x-dependent quadratic that closes into an ellipse.  Returns the
    left-hand side.
    """
    r = sol.amplitude_ratio(params)
    s = params.k * np.asarray(x, dtype=float) / (3.0 * params.omega)
    pb = np.asarray(pbar, dtype=float)
    return (1.0 + s * s) * pb * pb - 2.0 * pb + (1.0 - r * r)


# ----------------------------------------------------------------------
# nonlocal first-order form
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class FirstOrderState:
    """A point (u, x) of the first-order reformulation."""

    u: float
    x: float


@dataclass(frozen=True)
class FirstOrderFlow:
    """Sampled solution of the first-order pair on one exponent branch.

    The defining system is u' = u f(x) / eta, x' = u + W(x) with
    W = eta (g/f).  The multiplier of the underlying variational problem is
    u^eta, so u must stay positive along any flow started at u > 0; the
    ``multiplier`` property enforces that.
    """

    t: np.ndarray
    u: np.ndarray
    x: np.ndarray
    branch: EtaBranch
    params: LienardParams

    @property
    def xdot(self) -> np.ndarray:
        return self.u + w_of(self.x, self.branch, self.params)

    @property
    def multiplier(self) -> np.ndarray:
        if np.any(self.u <= 0.0):
            raise DomainError("u reached zero: multiplier u^eta undefined")
        return self.u**self.branch.eta


def w_of(x, branch: EtaBranch, params: LienardParams):
    """Velocity shift W(x) = eta (g/f) = eta (a x^2 + b)."""
    return branch.eta * restoring_over_damping(x, params)


def nonlocal_state(x: float, xdot: float, branch: EtaBranch, params: LienardParams) -> FirstOrderState:
    """Map a phase point (x, x') to first-order coordinates (u, x)."""
    return FirstOrderState(u=xdot - w_of(x, branch, params), x=x)


def first_order_flow(
    initial: FirstOrderState,
    branch: EtaBranch,
    params: LienardParams,
    t_end: float,
    *,
    rtol: float = 1e-11,
    atol: float = 1e-13,
    samples: int = 1024,
) -> FirstOrderFlow:
    """Integrate the first-order pair from t = 0 with uniform sampling."""
    if samples < 2:
        raise ValueError("samples must be at least 2")

    def f(t: float, y: np.ndarray) -> np.ndarray:
        u, x = y
        return np.array(
            [u * damping(x, params) / branch.eta, u + w_of(x, branch, params)]
        )

    t_eval = np.linspace(0.0, t_end, samples)
    ts, ys = solve_rk45(
        f, 0.0, [initial.u, initial.x], t_end, rtol=rtol, atol=atol, t_eval=t_eval
    )
    return FirstOrderFlow(t=ts, u=ys[:, 0], x=ys[:, 1], branch=branch, params=params)


def jlm_residual(flow: FirstOrderFlow) -> np.ndarray:
    """How well d/dt log(multiplier) tracks the damping coefficient.

    The construction demands d/dt log(u^eta) = f(x) = k x along solutions.
    The logarithmic derivative is taken with the fourth-order interior
    stencil on the flow's uniform time grid, so values are aligned with
    ``flow.t[2:-2]``.  Returns the pointwise difference.
    """
    h = float(flow.t[1] - flow.t[0])
    if np.any(flow.u <= 0.0):
        raise DomainError("u reached zero: log multiplier undefined")
    log_mult = flow.branch.eta * np.log(flow.u)
    rate = central_d1(log_mult, h)
    return rate - damping(flow.x[2:-2], flow.params)


def fit_solution_params(
    x0: float,
    v0: float,
    params: LienardParams,
    *,
    tol: float = 1e-13,
    max_iter: int = 60,
) -> SolutionParams:
    """Find amplitude and phase whose closed-form orbit passes through (x0, v0).

    Damped Newton on (A, delta) with a finite-difference Jacobian, seeded
    from the harmonic-limit guess A = sqrt(x0^2 + (v0/omega)^2),
    delta = atan2(omega x0, v0).  Only initial conditions inside the
    bounded-orbit region (|kA/(3 omega)| < 1) are representable; outside
    it the iteration fails with ConvergenceError.
    """
    w = params.omega
    scale = max(1.0, abs(x0), abs(v0) / w)
    guess_A = math.hypot(x0, v0 / w)
    if guess_A == 0.0:
        return SolutionParams(A=0.0, delta=0.0)
    guess = np.array([guess_A, math.atan2(w * x0, v0)])
    limit = 3.0 * w / abs(params.k)  # |A| must stay below this

    def residual(p: np.ndarray) -> np.ndarray:
        s = SolutionParams(A=p[0], delta=p[1])
        return np.array(
            [float(exact_x(0.0, params, s)) - x0, float(exact_xdot(0.0, params, s)) - v0]
        )

    def clip(p: np.ndarray) -> np.ndarray:
        cap = 0.999999 * limit
        return np.array([min(max(p[0], -cap), cap), p[1]])

    p = clip(guess)
    r = residual(p)
    for _ in range(max_iter):
        if max(abs(r[0]), abs(r[1]) / w) < tol * scale:
            A, delta = p
            if A < 0.0:
                A, delta = -A, delta + math.pi
            delta = math.remainder(delta, 2.0 * math.pi)
            return SolutionParams(A=A, delta=delta)
        J = np.empty((2, 2))
        for col in range(2):
            h = 1e-7 * max(1.0, abs(p[col]))
            bumped = p.copy()
            bumped[col] += h
            if clip(bumped)[col] != bumped[col]:
                # bump would leave the representable region (amplitude at
                # the cap): difference inward instead of flattening the column
                h = -h
                bumped[col] = p[col] + h
            J[:, col] = (residual(clip(bumped)) - r) / h
        try:
            step = np.linalg.solve(J, -r)
        except np.linalg.LinAlgError:
            step, *_ = np.linalg.lstsq(J, -r, rcond=None)
            if not np.all(np.isfinite(step)):
                raise ConvergenceError("singular Jacobian while fitting orbit parameters")
        lam = 1.0
        best = float(np.linalg.norm(r))
        while lam > 1e-6:
            trial = clip(p + lam * step)
            r_trial = residual(trial)
            if float(np.linalg.norm(r_trial)) < best:
                p, r = trial, r_trial
                break
            lam *= 0.5
        else:
            raise ConvergenceError(
                f"orbit fit stalled at residual {best}; initial state may lie outside the bounded region"
            )
    raise ConvergenceError("orbit fit did not converge")
