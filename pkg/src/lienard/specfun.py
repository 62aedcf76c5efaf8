"""Self-contained numerical kernels used across the package.

Confluent hypergeometric series, a Sturm-sequence bisection eigensolver for
symmetric tridiagonal matrices, inverse iteration for the matching vectors,
composite Simpson quadrature, and the five-point difference stencils every
residual check leans on.  All of it is plain array code so the test-suite
can cross-check each kernel against an independent reference.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

__all__ = [
    "ConvergenceError",
    "KummerParams",
    "kummer_1f1",
    "hyp1f1",
    "kummer_ode_residual",
    "Tridiagonal",
    "sturm_count",
    "eig_tridiagonal",
    "inverse_iteration",
    "integrate_density",
    "central_d1",
    "central_d2",
    "fd_derivative",
    "fd_second_derivative",
]

_TINY = np.finfo(float).tiny
_EPS = np.finfo(float).eps


class ConvergenceError(RuntimeError):
    """An iterative kernel failed to reach its tolerance."""


@dataclass(frozen=True)
class KummerParams:
    """Arguments (a, b, z) of the confluent hypergeometric function 1F1.

    ``b`` must not be zero or a negative integer (the series poles).
    """

    a: float
    b: float
    z: float

    def __post_init__(self) -> None:
        if self.b <= 0.0 and self.b == math.floor(self.b):
            raise ValueError(f"1F1 pole: b = {self.b} is zero or a negative integer")


def kummer_1f1(params: KummerParams, *, tol: float = 1e-15, max_terms: int = 1000) -> float:
    """Evaluate 1F1(a; b; z) by its Taylor series.

    The series is sum_j (a)_j / (b)_j z^j / j! with term ratio
    (a+j) z / ((b+j)(j+1)); see DLMF 13.2.2.  Summation stops when a term
    falls below ``tol`` relative to the running sum, or exactly after
    n + 1 terms when a = -n is a nonpositive integer (the polynomial case,
    where the ratio hits zero).  Direct summation is accurate for the
    moderate |z| this package needs; no asymptotic pieces are included.

    Raises
    ------
    ConvergenceError
        If ``max_terms`` terms do not reach ``tol``.
    """
    a, b, z = params.a, params.b, params.z
    total = 1.0
    term = 1.0
    for j in range(max_terms):
        term *= (a + j) * z / ((b + j) * (j + 1.0))
        if term == 0.0:
            return total
        total += term
        if abs(term) <= tol * abs(total):
            return total
    raise ConvergenceError(
        f"1F1({a}; {b}; {z}) series did not converge in {max_terms} terms"
    )


def hyp1f1(a: float, b: float, z: float, **kwargs) -> float:
    """Convenience wrapper: 1F1(a; b; z) from plain floats."""
    return kummer_1f1(KummerParams(a=a, b=b, z=z), **kwargs)


def kummer_ode_residual(params: KummerParams, fn=None, *, h: float = 1e-3) -> float:
    """Residual of the confluent equation z w'' + (b - z) w' - a w at z.

    ``fn`` defaults to the series evaluator; pass any candidate solution to
    test it.  Derivatives come from the five-point central stencils, so the
    residual of a true solution is limited by the O(h^4) truncation and
    cancellation near machine precision, not by the identity itself.
    Requires z > 0 so the stencil stays on the open half-line.
    """
    a, b, z = params.a, params.b, params.z
    if z <= 0.0:
        raise ValueError(f"residual stencil needs z > 0, got {z}")
    if fn is None:
        fn = lambda zz: hyp1f1(a, b, zz)
    step = min(h, z / 4.0)
    d1 = fd_derivative(fn, z, h=step)
    d2 = fd_second_derivative(fn, z, h=step)
    return z * d2 + (b - z) * d1 - a * fn(z)


# ----------------------------------------------------------------------
# symmetric tridiagonal eigenproblems
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class Tridiagonal:
    """A real symmetric tridiagonal matrix stored as two read-only bands."""

    diag: np.ndarray
    off: np.ndarray

    def __post_init__(self) -> None:
        d = np.array(self.diag, dtype=float)
        e = np.array(self.off, dtype=float)
        if d.ndim != 1 or e.ndim != 1:
            raise ValueError("bands must be one-dimensional")
        if d.size < 2:
            raise ValueError(f"matrix order must be at least 2, got {d.size}")
        if e.size != d.size - 1:
            raise ValueError(f"off-diagonal has length {e.size}, expected {d.size - 1}")
        if not (np.all(np.isfinite(d)) and np.all(np.isfinite(e))):
            raise ValueError("bands must be finite")
        d.setflags(write=False)
        e.setflags(write=False)
        object.__setattr__(self, "diag", d)
        object.__setattr__(self, "off", e)

    @property
    def n(self) -> int:
        return self.diag.size

    @property
    def scale(self) -> float:
        """A cheap norm bound: the largest row sum of absolute entries."""
        pad = np.concatenate(([0.0], np.abs(self.off), [0.0]))
        return float(np.max(pad[:-1] + np.abs(self.diag) + pad[1:]))

    def matvec(self, v: np.ndarray) -> np.ndarray:
        out = self.diag * v
        out[:-1] += self.off * v[1:]
        out[1:] += self.off * v[:-1]
        return out


def _pivmin(esq_max: float) -> float:
    return _TINY * max(1.0, esq_max)


def sturm_count(T: Tridiagonal, lam: float) -> int:
    """Number of eigenvalues of T strictly below ``lam``.

    Counts negative pivots of the LDL^T factorization of T - lam I, the
    classical Sturm sequence (Golub & Van Loan, Matrix Computations,
    sec. 8.4).  Near-zero pivots are nudged to -pivmin, the usual guard
    against division blow-up; the count is then still correct up to a
    perturbation far below the bisection resolution.
    """
    d = T.diag.tolist()
    esq = (T.off * T.off).tolist()
    pivmin = _pivmin(max(esq) if esq else 1.0)
    count = 0
    q = d[0] - lam
    if abs(q) < pivmin:
        q = -pivmin
    if q < 0.0:
        count += 1
    for i in range(1, len(d)):
        q = d[i] - lam - esq[i - 1] / q
        if abs(q) < pivmin:
            q = -pivmin
        if q < 0.0:
            count += 1
    return count


def _bisect_one(d, esq, pivmin, j, lo, hi, tol):
    """Bisect for the j-th smallest eigenvalue inside [lo, hi]."""
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break  # interval at the floating-point floor
        count = 0
        q = d[0] - mid
        if abs(q) < pivmin:
            q = -pivmin
        if q < 0.0:
            count += 1
        for i in range(1, len(d)):
            q = d[i] - mid - esq[i - 1] / q
            if abs(q) < pivmin:
                q = -pivmin
            if q < 0.0:
                count += 1
        if count > j:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def eig_tridiagonal(
    T: Tridiagonal, m: int, *, workers: int = 1, tol: float = 0.0
) -> np.ndarray:
    """The m smallest eigenvalues of a symmetric tridiagonal matrix, ascending.

    Bisection on the Sturm count inside the Gershgorin enclosure.  With the
    default ``tol = 0`` each bracket is shrunk until its midpoint is no
    longer strictly interior, i.e. to the floating-point floor, which is
    well inside any practical tolerance; pass a positive ``tol`` to stop
    earlier.  ``workers > 1`` distributes the (independent) per-index
    bisections over a thread pool; results are bit-identical to the serial
    path because every bracket starts from the same global enclosure.

    Bisection is O(n) per midpoint and needs ~60 midpoints per eigenvalue
    at the floor, so the cost is O(60 m n): entirely acceptable for the
    handful of low-lying levels this package ever asks for.
    """
    if not 1 <= m <= T.n:
        raise ValueError(f"need 1 <= m <= {T.n}, got m = {m}")
    if workers < 1:
        raise ValueError(f"workers must be >= 1, got {workers}")
    d = T.diag.tolist()
    esq = (T.off * T.off).tolist()
    pivmin = _pivmin(max(esq) if esq else 1.0)
    radius = np.concatenate(([0.0], np.abs(T.off), [0.0]))
    lo_all = float(np.min(T.diag - radius[:-1] - radius[1:]))
    hi_all = float(np.max(T.diag + radius[:-1] + radius[1:]))
    if tol < 0.0:
        raise ValueError(f"tol must be >= 0, got {tol}")

    def task(j: int) -> float:
        return _bisect_one(d, esq, pivmin, j, lo_all, hi_all, tol)

    if workers == 1:
        vals = [task(j) for j in range(m)]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            vals = list(pool.map(task, range(m)))
    return np.array(vals)


def _lu_solve_factory(T: Tridiagonal, lam: float):
    """Factor T - lam I = P L U with partial pivoting; return a solver.

    The standard tridiagonal elimination with row swaps: U gains a second
    superdiagonal, L holds one multiplier per step.  Exact zero pivots are
    replaced by a tiny number so the factorization always completes; for
    inverse iteration that perturbation is exactly what one wants.
    """
    n = T.n
    d = T.diag.tolist()
    e = T.off.tolist()
    pivmin = _pivmin(max((x * x for x in e), default=1.0))

    u0 = [0.0] * n
    u1 = [0.0] * (n - 1)
    u2 = [0.0] * max(n - 2, 0)
    mult = [0.0] * (n - 1)
    swap = [False] * (n - 1)

    alpha = d[0] - lam
    beta = e[0]
    gamma = 0.0
    for i in range(n - 1):
        sub = e[i]
        diag_next = d[i + 1] - lam
        sup_next = e[i + 1] if i + 1 < n - 1 else 0.0
        if abs(alpha) >= abs(sub):
            if alpha == 0.0:
                alpha = pivmin
            li = sub / alpha
            u0[i] = alpha
            u1[i] = beta
            if i < n - 2:
                u2[i] = gamma
            mult[i] = li
            swap[i] = False
            alpha = diag_next - li * beta
            beta = sup_next - li * gamma
        else:
            li = alpha / sub
            u0[i] = sub
            u1[i] = diag_next
            if i < n - 2:
                u2[i] = sup_next
            mult[i] = li
            swap[i] = True
            alpha = beta - li * diag_next
            beta = gamma - li * sup_next
        gamma = 0.0
    u0[n - 1] = alpha if alpha != 0.0 else pivmin

    def solve(rhs: np.ndarray) -> np.ndarray:
        y = rhs.tolist()
        for i in range(n - 1):
            if swap[i]:
                y[i], y[i + 1] = y[i + 1], y[i]
            y[i + 1] -= mult[i] * y[i]
        x = [0.0] * n
        x[n - 1] = y[n - 1] / u0[n - 1]
        if n >= 2:
            x[n - 2] = (y[n - 2] - u1[n - 2] * x[n - 1]) / u0[n - 2]
        for i in range(n - 3, -1, -1):
            x[i] = (y[i] - u1[i] * x[i + 1] - u2[i] * x[i + 2]) / u0[i]
        return np.array(x)

    return solve


def inverse_iteration(
    T: Tridiagonal,
    eigenvalue: float,
    *,
    max_iter: int = 50,
    rtol: float = 1e-8,
    seed: int = 0,
) -> np.ndarray:
    """Unit eigenvector of T for an eigenvalue known to high accuracy.

    Repeatedly solves (T - lam I) w = v from a seeded random start; each
    solve amplifies the wanted component by 1/gap.  Converged when
    ||T v - lam v|| <= rtol * scale(T).  The returned vector is normalized
    and sign-fixed so its first component above noise level is positive,
    making results reproducible across runs and worker counts.
    """
    solve = _lu_solve_factory(T, eigenvalue)
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(T.n)
    v /= math.sqrt(float(v @ v))
    target = rtol * T.scale
    for _ in range(max_iter):
        w = solve(v)
        norm = math.sqrt(float(w @ w))
        if not math.isfinite(norm) or norm == 0.0:
            raise ConvergenceError("inverse iteration produced a degenerate solve")
        v = w / norm
        residual = T.matvec(v) - eigenvalue * v
        if math.sqrt(float(residual @ residual)) <= target:
            break
    else:
        raise ConvergenceError(
            f"inverse iteration did not reach rtol = {rtol} in {max_iter} sweeps"
        )
    cutoff = 1e-12 * float(np.max(np.abs(v)))
    for comp in v:
        if abs(comp) > cutoff:
            if comp < 0.0:
                v = -v
            break
    return v


# ----------------------------------------------------------------------
# quadrature and difference stencils
# ----------------------------------------------------------------------


def integrate_density(values: np.ndarray, grid: np.ndarray) -> float:
    """Integral of samples on a uniform grid: composite Simpson, 3/8 tail.

    With an even number of intervals this is plain composite Simpson; an
    odd count gets Simpson on the leading block and the 3/8 rule on the
    last three intervals, keeping O(h^4) accuracy either way.  The grid
    must be uniform (non-uniform spacing raises ValueError); integrals
    against a non-uniform coordinate should be recast through its Jacobian
    onto a uniform one.
    """
    f = np.asarray(values, dtype=float)
    x = np.asarray(grid, dtype=float)
    if f.shape != x.shape or f.ndim != 1:
        raise ValueError("values and grid must be matching one-dimensional arrays")
    if f.size < 3:
        raise ValueError(f"need at least 3 samples, got {f.size}")
    steps = np.diff(x)
    h = float(steps[0])
    if h <= 0.0 or np.max(np.abs(steps - h)) > 1e-9 * abs(h):
        raise ValueError("grid must be uniform and increasing")
    n_int = f.size - 1
    total = 0.0
    if n_int % 2 == 1:
        # peel off a 3/8 tail so the rest has an even interval count
        tail = f[-4:]
        total += 3.0 * h / 8.0 * (tail[0] + 3.0 * tail[1] + 3.0 * tail[2] + tail[3])
        f = f[: n_int - 2]
    if f.size >= 3:
        total += h / 3.0 * (f[0] + f[-1] + 4.0 * np.sum(f[1:-1:2]) + 2.0 * np.sum(f[2:-2:2]))
    return float(total)


def central_d1(values: np.ndarray, h: float) -> np.ndarray:
    """Fourth-order first derivative of uniform samples; interior only.

    Returns an array shorter by two points at each end, aligned with
    ``values[2:-2]``.
    """
    f = np.asarray(values, dtype=float)
    if f.size < 5:
        raise ValueError(f"stencil needs at least 5 samples, got {f.size}")
    return (f[:-4] - 8.0 * f[1:-3] + 8.0 * f[3:-1] - f[4:]) / (12.0 * h)


def central_d2(values: np.ndarray, h: float) -> np.ndarray:
    """Fourth-order second derivative of uniform samples; interior only."""
    f = np.asarray(values, dtype=float)
    if f.size < 5:
        raise ValueError(f"stencil needs at least 5 samples, got {f.size}")
    return (-f[:-4] + 16.0 * f[1:-3] - 30.0 * f[2:-2] + 16.0 * f[3:-1] - f[4:]) / (
        12.0 * h * h
    )


def fd_derivative(fn, x: float, *, h: float = 1e-5) -> float:
    """Five-point first derivative of a callable at a point."""
    return (fn(x - 2 * h) - 8.0 * fn(x - h) + 8.0 * fn(x + h) - fn(x + 2 * h)) / (12.0 * h)


def fd_second_derivative(fn, x: float, *, h: float = 1e-4) -> float:
    """Five-point second derivative of a callable at a point."""
    return (
        -fn(x - 2 * h)
        + 16.0 * fn(x - h)
        - 30.0 * fn(x)
        + 16.0 * fn(x + h)
        - fn(x + 2 * h)
    ) / (12.0 * h * h)
