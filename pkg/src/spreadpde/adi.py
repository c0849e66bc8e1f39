"""Peaceman-Rachford marching for the base price and its illiquidity correction.

Both equations are terminal-value problems marched backward from l = L to 0.
The base price V0 satisfies the homogeneous two-asset equation; each step
splits into an x-implicit and a y-implicit half:

    (I - dt/2 A_dx) V{l+1/2} = (I + dt/2 A_dy) V{l+1} + dt/2 A_dxdy V{l+1}
    (I - dt/2 A_dy) V{l}     = (I + dt/2 A_dx) V{l+1/2} + dt/2 A_dxdy V{l+1/2}

The first-order correction V1 runs the same splitting with zero terminal data
and a source built from the curvature of V0,

    G = -lambda_hat * (2*rho*s1*s2*x*y*Vxy*Vxx + s1^2*x^2*Vxx^2 + s2^2*y^2*Vxy^2),

which is -lambda_hat times the positive semidefinite form a^2 + 2*rho*a*b + b^2
in a = s1*x*Vxx, b = s2*y*Vxy, hence G <= 0 wherever lambda_hat >= 0.  The
combined price at t0 is V0 + epsilon*V1.

One published variant of the V1 scheme applies the second half-step cross term
to the V0 half-step surface instead of the V1 one; that reading breaks the
splitting consistency requirement (which involves only V1 and G), so the V1
surface is the default and the literal variant is kept behind
``cross_as_printed`` for comparison.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .closed_form import MarketParams
from .errors import DomainError, InstabilityError
from .grid import Grid, SpreadPayoff, Surface, check_surface, payoff_surface
from .impact import ImpactParams, lambda_hat_profile
from .operators import (
    DEFAULT_CONFIG,
    OperatorConfig,
    TridiagonalFactorization,
    extend_xy,
    implicit_sweep_factor,
    line_coefficients,
)


@dataclass
class SourceTerm:
    """Forcing surface G at one time level of the correction equation."""

    values: Surface


@dataclass
class SolveResult:
    """All time levels of V0 and V1 plus the recombined t0 surface."""

    v0_levels: list[Surface]
    v1_levels: list[Surface]
    combined_t0: Surface


class _OperatorSet:
    """Precomputed stencil data shared by every step of one march."""

    def __init__(self, grid: Grid, params: MarketParams, cfg: OperatorConfig):
        self.grid = grid
        self.lo_x, self.di_x, self.up_x = line_coefficients(
            params.sigma1, params.r, grid.x_nodes, grid.dx, cfg.theta
        )
        self.lo_y, self.di_y, self.up_y = line_coefficients(
            params.sigma2, params.r, grid.y_nodes, grid.dy, 1.0 - cfg.theta
        )
        self.cross_coef = (
            params.sigma1
            * params.sigma2
            * params.rho
            * np.outer(grid.x_nodes, grid.y_nodes)
            / (4.0 * grid.dx * grid.dy)
        )
        self.solver_x: TridiagonalFactorization = implicit_sweep_factor(
            grid, params, cfg, "x"
        )
        self.solver_y: TridiagonalFactorization = implicit_sweep_factor(
            grid, params, cfg, "y"
        )

    def adx(self, v: np.ndarray) -> np.ndarray:
        ext = np.empty((v.shape[0] + 2, v.shape[1]))
        ext[1:-1] = v
        ext[0] = 2.0 * v[0] - v[1]
        ext[-1] = 2.0 * v[-1] - v[-2]
        return (
            self.lo_x[:, None] * ext[:-2]
            + self.di_x[:, None] * ext[1:-1]
            + self.up_x[:, None] * ext[2:]
        )

    def ady(self, v: np.ndarray) -> np.ndarray:
        ext = np.empty((v.shape[0], v.shape[1] + 2))
        ext[:, 1:-1] = v
        ext[:, 0] = 2.0 * v[:, 0] - v[:, 1]
        ext[:, -1] = 2.0 * v[:, -1] - v[:, -2]
        return (
            self.lo_y[None, :] * ext[:, :-2]
            + self.di_y[None, :] * ext[:, 1:-1]
            + self.up_y[None, :] * ext[:, 2:]
        )

    def adxdy(self, v: np.ndarray) -> np.ndarray:
        ext = extend_xy(v)
        return self.cross_coef * (
            ext[2:, 2:] - ext[2:, :-2] - ext[:-2, 2:] + ext[:-2, :-2]
        )

    def half_step_x(self, v: np.ndarray, forcing: np.ndarray | None = None) -> np.ndarray:
        """x-implicit half: solve (I - dt/2 A_dx) out = (I + dt/2 A_dy + dt/2 A_dxdy) v - dt/2 forcing."""
        w = 0.5 * self.grid.dt
        rhs = v + w * (self.ady(v) + self.adxdy(v))
        if forcing is not None:
            rhs -= w * forcing
        return self.solver_x.solve(rhs)

    def half_step_y(
        self,
        v_half: np.ndarray,
        forcing: np.ndarray | None = None,
        cross_arg: np.ndarray | None = None,
    ) -> np.ndarray:
        """y-implicit half; the cross term acts on ``cross_arg`` (default v_half)."""
        w = 0.5 * self.grid.dt
        rhs = v_half + w * (
            self.adx(v_half) + self.adxdy(v_half if cross_arg is None else cross_arg)
        )
        if forcing is not None:
            rhs -= w * forcing
        return self.solver_y.solve(rhs.T).T


def _require_finite(values: np.ndarray, what: str) -> None:
    if not np.isfinite(values).all():
        raise InstabilityError(f"{what} contains non-finite values; march diverged")


def step_v0(
    v_next: Surface,
    grid: Grid,
    params: MarketParams,
    cfg: OperatorConfig = DEFAULT_CONFIG,
    _ops: _OperatorSet | None = None,
) -> Surface:
    """One backward step of the base-price march: level l+1 -> level l."""
    check_surface(v_next, grid)
    _require_finite(v_next.values, "input surface")
    ops = _ops if _ops is not None else _OperatorSet(grid, params, cfg)
    v_half = ops.half_step_x(v_next.values)
    v_curr = ops.half_step_y(v_half)
    _require_finite(v_curr, "stepped surface")
    return Surface(values=v_curr, time_index=v_next.time_index - 1)


def solve_v0(
    grid: Grid,
    params: MarketParams,
    payoff: SpreadPayoff,
    cfg: OperatorConfig = DEFAULT_CONFIG,
) -> list[Surface]:
    """March the base price from the payoff at l = L down to l = 0.

    Returns all L+1 levels; level L is the payoff surface itself.  Every
    retained level is needed later to assemble the correction's source term
    at matching times.
    """
    ops = _OperatorSet(grid, params, cfg)
    levels: list[Surface] = [None] * (grid.L + 1)  # type: ignore[list-item]
    levels[grid.L] = payoff_surface(grid, payoff)
    current = levels[grid.L]
    for level in range(grid.L - 1, -1, -1):
        current = step_v0(current, grid, params, cfg, _ops=ops)
        levels[level] = current
    return levels


def compute_g(
    v0: Surface,
    grid: Grid,
    params: MarketParams,
    impact: ImpactParams,
    t: float,
) -> SourceTerm:
    """Source term G built from the curvature of one base-price level.

    Second derivatives use the same centered stencils (with ghost borders) as
    the operators; the impact shape is evaluated at the x node of each row.
    """
    check_surface(v0, grid)
    _require_finite(v0.values, "base-price surface")
    ext = extend_xy(v0.values)
    dx2 = grid.dx * grid.dx
    v_xx = (ext[2:, 1:-1] - 2.0 * ext[1:-1, 1:-1] + ext[:-2, 1:-1]) / dx2
    v_xy = (ext[2:, 2:] - ext[2:, :-2] - ext[:-2, 2:] + ext[:-2, :-2]) / (
        4.0 * grid.dx * grid.dy
    )
    lam = lambda_hat_profile(t, grid.x_nodes, grid.T, impact)[:, None]
    a = params.sigma1 * grid.x_nodes[:, None] * v_xx
    b = params.sigma2 * grid.y_nodes[None, :] * v_xy
    g = -lam * (a * a + 2.0 * params.rho * a * b + b * b)
    return SourceTerm(values=Surface(values=g, time_index=v0.time_index))


def step_v1(
    v1_next: Surface,
    g_curr: SourceTerm,
    g_next: SourceTerm,
    grid: Grid,
    params: MarketParams,
    cfg: OperatorConfig = DEFAULT_CONFIG,
    v0_half: Surface | None = None,
    cross_as_printed: bool = False,
    _ops: _OperatorSet | None = None,
) -> Surface:
    """One backward step of the correction march, forced by G at both levels."""
    check_surface(v1_next, grid)
    _require_finite(v1_next.values, "input surface")
    ops = _ops if _ops is not None else _OperatorSet(grid, params, cfg)
    v_half = ops.half_step_x(v1_next.values, forcing=g_next.values.values)
    cross_arg = None
    if cross_as_printed:
        if v0_half is None:
            raise DomainError("cross_as_printed requires the base-price half-step surface")
        cross_arg = v0_half.values
    v_curr = ops.half_step_y(v_half, forcing=g_curr.values.values, cross_arg=cross_arg)
    _require_finite(v_curr, "stepped surface")
    return Surface(values=v_curr, time_index=v1_next.time_index - 1)


def solve_full(
    grid: Grid,
    params: MarketParams,
    impact: ImpactParams,
    payoff: SpreadPayoff,
    cfg: OperatorConfig = DEFAULT_CONFIG,
    cross_as_printed: bool = False,
) -> SolveResult:
    """Base price, correction, and the recombined t0 surface V0 + epsilon*V1."""
    ops = _OperatorSet(grid, params, cfg)
    v0_levels = solve_v0(grid, params, payoff, cfg)

    v1_levels: list[Surface] = [None] * (grid.L + 1)  # type: ignore[list-item]
    v1_levels[grid.L] = Surface(
        values=np.zeros_like(v0_levels[grid.L].values), time_index=grid.L
    )
    g_next = compute_g(v0_levels[grid.L], grid, params, impact, grid.T)
    current = v1_levels[grid.L]
    for level in range(grid.L - 1, -1, -1):
        g_curr = compute_g(v0_levels[level], grid, params, impact, level * grid.dt)
        v0_half = None
        if cross_as_printed:
            v0_half = Surface(
                values=ops.half_step_x(v0_levels[level + 1].values),
                time_index=level,
            )
        current = step_v1(
            current,
            g_curr,
            g_next,
            grid,
            params,
            cfg,
            v0_half=v0_half,
            cross_as_printed=cross_as_printed,
            _ops=ops,
        )
        v1_levels[level] = current
        g_next = g_curr

    combined = Surface(
        values=v0_levels[0].values + impact.epsilon * v1_levels[0].values,
        time_index=0,
    )
    return SolveResult(v0_levels=v0_levels, v1_levels=v1_levels, combined_t0=combined)
