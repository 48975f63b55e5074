"""Finite-difference solver for the reset-coupled two-point problems.

Every governing equation here has the shape

    (1/2) u'' + mu u' - (r + lam U(x)) u + r C + s(x) = 0,   U(x) = p + q x,

on [0, X_max] with u(0) given and a far-field closure at X_max, where the
coupling constant C is not free: it must equal u(x_reset).  The problem is
affine in C, so it is solved by superposition: once with C := 0 (u_a,
carrying the boundary data and source) and once with C := 1 (u_b, with
homogeneous data), after which

    C* = u_a(x_R) / (1 - u_b(x_R)),     u = u_a + C* u_b.

Discretization is second-order central differences (ghost-node elimination
for Neumann closures keeps the system tridiagonal); the linear solves use
LAPACK's banded routine.  The grid spacing is chosen so that x_reset falls
exactly on a node: the nominal X_max is stretched by at most half a cell,
which the far-field truncation analysis makes irrelevant, while evaluating
the coupling off-node would cost O(h) accuracy in C*.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import solve_banded

from .errors import (
    FarFieldMissing,
    IllConditioned,
    NoResetLimit,
    SingularCoupling,
)
from .model import decay_exponent, validate

__all__ = [
    "FarField",
    "ResetBvp",
    "GridSolution",
    "MomentResult",
    "default_x_max",
    "lt_problem",
    "solve",
    "solve_with_coupling",
    "fpa_lt",
    "moment_solve",
]

COUPLING_EPS = 1e-10
MIN_GRID_N = 64


def _resolve(v, x_max):
    return float(v(x_max)) if callable(v) else float(v)


@dataclass(frozen=True)
class FarField:
    """Closure at X_max.

    kind "dirichlet": u(X_max) = value + coupling_scale * C.
    kind "neumann":   u'(X_max) = value (independent of C).
    ``value`` and ``coupling_scale`` may be callables of the effective
    X_max, resolved at solve time (the growth closures need the actual
    boundary position).
    """

    kind: str
    value: object = 0.0
    coupling_scale: object = 0.0


@dataclass(frozen=True)
class ResetBvp:
    """One reset-coupled linear problem; see the module docstring."""

    model: object
    potential: tuple  # (p, q) with p, q >= 0
    lam: float
    left_value: float
    far_field: FarField
    source: object = None  # vectorized callable s(x), or None

    def __post_init__(self):
        validate(self.model)
        p, q = self.potential
        if p < 0 or q < 0:
            raise ValueError(f"potential coefficients must be >= 0, got {self.potential}")
        if self.lam < 0:
            raise ValueError(f"lambda must be >= 0, got {self.lam}")
        if self.far_field.kind not in ("dirichlet", "neumann"):
            raise FarFieldMissing(f"unknown far-field kind {self.far_field.kind!r}")


@dataclass(frozen=True)
class GridSolution:
    grid: np.ndarray
    values: np.ndarray
    coupling: float
    residual_max: float
    h: float
    reset_index: int
    reset_snap: float
    meta: dict = field(default_factory=dict)

    def interp(self, x):
        return np.interp(x, self.grid, self.values)


@dataclass(frozen=True)
class MomentResult:
    x: np.ndarray
    values: np.ndarray
    meta: dict
    solution: GridSolution


def default_x_max(model, lam=0.0):
    """x_reset plus 20 decay lengths of the slowest homogeneous mode.

    The decaying homogeneous solution falls off like e^{-k x} with
    k = mu + sqrt(mu^2 + 2(lam + r)), so 20/k lengths push the truncation
    error below 1e-8.  (For negative drift k shrinks and the domain grows
    accordingly; a fixed sqrt(2r)-based recipe would under-resolve it.)
    """
    k = decay_exponent(model, lam)
    if k <= 0:
        raise NoResetLimit("an unbounded domain needs r > 0 (or lam > 0) to truncate")
    return model.x_reset + 20.0 / k


def _build_grid(model, grid_n, x_max):
    if grid_n < MIN_GRID_N:
        raise ValueError(f"grid_n must be >= {MIN_GRID_N}, got {grid_n}")
    if x_max <= model.x_reset:
        raise ValueError(f"x_max={x_max} must exceed x_reset={model.x_reset}")
    h0 = x_max / grid_n
    m = max(1, round(model.x_reset / h0))
    h = model.x_reset / m
    grid = np.arange(grid_n + 1) * h
    return grid, h, m


def _assemble(problem, grid, h, coupling, left_value, far_value, with_source):
    """Build the tridiagonal bands and right-hand side for a frozen coupling."""
    model = problem.model
    n = len(grid) - 1
    p, q = problem.potential
    pot = model.r + problem.lam * (p + q * grid)
    s = np.zeros(n + 1)
    if with_source and problem.source is not None:
        s = np.asarray(problem.source(grid), dtype=float)

    inv_h2 = 1.0 / (h * h)
    lower = np.full(n + 1, 0.5 * inv_h2 - model.mu / (2.0 * h))
    diag = -inv_h2 - pot
    upper = np.full(n + 1, 0.5 * inv_h2 + model.mu / (2.0 * h))
    rhs = -(model.r * coupling + s)

    diag[0], upper[0], rhs[0] = 1.0, 0.0, left_value
    if problem.far_field.kind == "dirichlet":
        diag[n], lower[n] = 1.0, 0.0
        rhs[n] = far_value
    else:
        # ghost node u_{n+1} = u_{n-1} + 2 h beta keeps the band tridiagonal
        lower[n] = inv_h2
        diag[n] = -inv_h2 - pot[n]
        rhs[n] = -(model.r * coupling + s[n]) - far_value * (1.0 / h + model.mu)

    return lower, diag, upper, rhs


def _solve_bands(bands):
    lower, diag, upper, rhs = bands
    n1 = len(diag)
    ab = np.zeros((3, n1))
    ab[0, 1:] = upper[:-1]
    ab[1, :] = diag
    ab[2, :-1] = lower[1:]
    try:
        u = solve_banded((1, 1), ab, rhs)
    except np.linalg.LinAlgError as exc:
        raise IllConditioned(str(exc)) from exc
    if not np.all(np.isfinite(u)):
        raise IllConditioned("tridiagonal solve produced non-finite values")
    return u


def _interior_residual(bands, u):
    lower, diag, upper, rhs = bands
    res = diag * u
    res[:-1] += upper[:-1] * u[1:]
    res[1:] += lower[1:] * u[:-1]
    return float(np.max(np.abs((res - rhs)[1:-1]))) if len(u) > 2 else 0.0


def solve(problem, grid_n=4096, x_max=None):
    """Solve the coupled problem by superposition over the reset constant."""
    model = problem.model
    if x_max is None:
        x_max = default_x_max(model, problem.lam)
    grid, h, m = _build_grid(model, grid_n, x_max)
    ff = problem.far_field
    x_end = grid[-1]

    if ff.kind == "dirichlet":
        u_a, _ = _assemble_and_solve(problem, grid, h, 0.0, problem.left_value,
                                     _resolve(ff.value, x_end), True)
        u_b, _ = _assemble_and_solve(problem, grid, h, 1.0, 0.0,
                                     _resolve(ff.coupling_scale, x_end), False)
    else:
        u_a, _ = _assemble_and_solve(problem, grid, h, 0.0, problem.left_value,
                                     _resolve(ff.value, x_end), True)
        u_b, _ = _assemble_and_solve(problem, grid, h, 1.0, 0.0, 0.0, False)

    denom = 1.0 - u_b[m]
    if abs(denom) < COUPLING_EPS:
        raise SingularCoupling(f"|1 - u_b(x_R)| = {abs(denom):.3g} below {COUPLING_EPS}")
    coupling = u_a[m] / denom
    values = u_a + coupling * u_b

    fixed = solve_with_coupling(problem, coupling, grid_n, x_max)
    return GridSolution(
        grid=grid,
        values=values,
        coupling=coupling,
        residual_max=fixed.residual_max,
        h=h,
        reset_index=m,
        reset_snap=abs(grid[m] - model.x_reset),
        meta={"x_max": float(x_end), "grid_n": grid_n, "lam": problem.lam},
    )


def solve_with_coupling(problem, coupling, grid_n=4096, x_max=None):
    """Solve with the reset constant frozen (no fixed-point step).

    Used for the superposition cross-check and the residual report.
    """
    model = problem.model
    if x_max is None:
        x_max = default_x_max(model, problem.lam)
    grid, h, m = _build_grid(model, grid_n, x_max)
    ff = problem.far_field
    if ff.kind == "dirichlet":
        far = _resolve(ff.value, grid[-1]) + _resolve(ff.coupling_scale, grid[-1]) * coupling
    else:
        far = _resolve(ff.value, grid[-1])
    u, bands = _assemble_and_solve(problem, grid, h, coupling, problem.left_value, far, True)
    return GridSolution(
        grid=grid,
        values=u,
        coupling=coupling,
        residual_max=_interior_residual(bands, u),
        h=h,
        reset_index=m,
        reset_snap=abs(grid[m] - model.x_reset),
        meta={"x_max": float(grid[-1]), "grid_n": grid_n, "lam": problem.lam},
    )


def lt_problem(model, lam, potential):
    """Transform problem for exp(-lam * integral of U along the path).

    u(0) = 1; the far boundary takes the slowly varying particular branch
    u(X_max) = r C / (lam U(X_max) + r), which is exact for U = 1 and the
    correct algebraic branch for growing U.
    """
    validate(model)
    if model.r == 0:
        raise NoResetLimit("transform problems need r > 0 (no coupling otherwise)")
    p, q = potential
    ff = FarField(
        kind="dirichlet",
        value=0.0,
        coupling_scale=lambda xm: model.r / (lam * (p + q * xm) + model.r),
    )
    return ResetBvp(model, (p, q), lam, 1.0, ff, None)


def fpa_lt(model, x, lam, grid_n=4096, x_max=None):
    """Numeric E[exp(-lam A(x))]: no elementary closed form exists, so this
    is the production route for the FPA transform.  Decreasing in lam and
    x; equals 1 at lam = 0 up to solver tolerance."""
    if lam < 0:
        raise ValueError(f"lambda must be >= 0, got {lam}")
    sol = solve(lt_problem(model, lam, (0.0, 1.0)), grid_n=grid_n, x_max=x_max)
    return float(sol.interp(x))


_MOMENT_CLOSURES = {
    # (which, order) -> far-field derivative from the stated growth law
    ("fpt", 1): lambda model, xm: 0.0,  # E[tau] -> const
    ("fpt", 2): lambda model, xm: 0.0,  # E[tau^2] -> const
    ("fpa", 1): lambda model, xm: 1.0 / model.r,  # E[A] ~ x/r
    ("fpa", 2): lambda model, xm: 4.0 * xm / model.r**2,  # E[A^2] ~ 2x^2/r^2
    ("joint", 2): lambda model, xm: (
        (math.exp(model.x_reset * decay_exponent(model)) + 1.0) / model.r**2
    ),  # V(x) grows linearly
}


def _moment_problem(model, which, order, source):
    try:
        closure = _MOMENT_CLOSURES[(which, order)]
    except KeyError:
        raise FarFieldMissing(
            f"no far-field closure defined for ({which!r}, n={order})"
        ) from None
    potential = (1.0, 0.0) if which == "fpt" else (0.0, 1.0)
    ff = FarField(kind="neumann", value=lambda xm, _m=model: closure(_m, xm))
    return ResetBvp(model, potential, 0.0, 0.0, ff, source)


def moment_solve(model, which, n, x_grid, grid_n=4096, x_max=None):
    """Solve the moment recursion G T_n = -n U T_{n-1} - r T_n(x_R).

    which: "fpt" (U = 1), "fpa" (U = x) or "joint" (the mixed moment
    E[tau A], sourced by x E[tau(x)] + E[A(x)]); n in {1, 2}.  Lower-order
    moments are solved on the same grid and fed through the source term.
    Returns a :class:`MomentResult` with values interpolated onto x_grid.
    """
    validate(model)
    if model.r == 0:
        raise NoResetLimit("moment problems need r > 0 (moments diverge otherwise)")
    if which not in ("fpt", "fpa", "joint"):
        raise FarFieldMissing(f"unknown equation class {which!r}")
    if which != "joint" and n not in (1, 2):
        raise FarFieldMissing(f"no closure defined for {which!r} moments of order {n}")

    x_grid = np.atleast_1d(np.asarray(x_grid, dtype=float))
    if x_max is None:
        x_max = max(default_x_max(model), float(x_grid.max()) + 10.0 / decay_exponent(model))

    meta = {"which": which, "order": n}

    def solve_chain(kind, order):
        if order == 1:
            u_of_x = (lambda xs: np.ones_like(xs)) if kind == "fpt" else (lambda xs: xs)
            prob = _moment_problem(model, kind, 1, u_of_x)
            return solve(prob, grid_n=grid_n, x_max=x_max)
        prev = solve_chain(kind, 1)
        grid_vals = prev.values

        def src(xs, _g=prev.grid, _v=grid_vals, _kind=kind):
            t_prev = np.interp(xs, _g, _v)
            u = np.ones_like(xs) if _kind == "fpt" else xs
            return 2.0 * u * t_prev

        return solve(_moment_problem(model, kind, 2, src), grid_n=grid_n, x_max=x_max)

    if which == "joint":
        t1 = solve_chain("fpt", 1)
        a1 = solve_chain("fpa", 1)

        def src(xs, _tg=t1.grid, _tv=t1.values, _ag=a1.grid, _av=a1.values):
            return xs * np.interp(xs, _tg, _tv) + np.interp(xs, _ag, _av)

        sol = solve(_moment_problem(model, "joint", 2, src), grid_n=grid_n, x_max=x_max)
        if model.mu != 0.0:
            meta["oracle"] = "numeric-only, no published closed form for drifted joint moment"
    else:
        sol = solve_chain(which, n)
        if model.mu != 0.0 and (which, n) == ("fpa", 2):
            meta["oracle"] = "numeric-only, no published closed form for drifted E[A^2]"

    return MomentResult(x=x_grid, values=sol.interp(x_grid), meta=meta, solution=sol)
