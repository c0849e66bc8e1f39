"""Second-order spatial operators, ghost-node extrapolation, tridiagonal solves.

The two-asset generator splits into

    A_x  = (1/2)*sigma1^2*x^2 d2/dx2 + r*x d/dx - r*Theta,
    A_y  = (1/2)*sigma2^2*y^2 d2/dy2 + r*y d/dy - r*(1-Theta),
    A_xy = sigma1*sigma2*rho*x*y d2/dxdy,

discretized with centered three-point stencils and the four-point cross
stencil.  Centered stencils at the domain edges reference fictitious nodes
one step outside; those are filled by linear extrapolation,

    V[-1] = 2*V[0] - V[1],      V[M+1] = 2*V[M] - V[M-1],

which makes the boundary second difference vanish exactly (diffusion drops
out of the edge rows, leaving convection/reaction only).  Implicit sweeps
fold the same relations into the first/last matrix rows algebraically, so
every line solve stays strictly tridiagonal.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .closed_form import MarketParams
from .errors import DomainError, SingularPivotError
from .grid import Grid, Surface, check_surface

_PIVOT_FLOOR = 1e-300


@dataclass(frozen=True)
class OperatorConfig:
    """Splitting weight Theta in [0, 1] for the -r*V reaction term.

    Theta = 0 (the default used throughout this package) puts the full
    reaction term into the y-direction operator; the stability constants
    assume this placement.
    """

    theta: float = 0.0

    def __post_init__(self) -> None:
        if not 0.0 <= self.theta <= 1.0:
            raise DomainError(f"theta must lie in [0, 1], got {self.theta}")


DEFAULT_CONFIG = OperatorConfig()


def line_coefficients(
    sigma: float, rate: float, nodes: np.ndarray, step: float, reaction_weight: float
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Per-node (lower, diag, upper) stencil weights of one direction's operator."""
    diffusion = 0.5 * sigma * sigma * nodes * nodes / (step * step)
    convection = rate * nodes / (2.0 * step)
    lower = diffusion - convection
    diag = -2.0 * diffusion - rate * reaction_weight
    upper = diffusion + convection
    return lower, diag, upper


# ---------------------------------------------------------------------------
# Ghost-node extension
# ---------------------------------------------------------------------------

def extend_x(values: np.ndarray) -> np.ndarray:
    """Append linearly extrapolated ghost rows at x-index -1 and M+1."""
    out = np.empty((values.shape[0] + 2, values.shape[1]))
    out[1:-1] = values
    out[0] = 2.0 * values[0] - values[1]
    out[-1] = 2.0 * values[-1] - values[-2]
    return out


def extend_y(values: np.ndarray) -> np.ndarray:
    """Append linearly extrapolated ghost columns at y-index -1 and N+1."""
    out = np.empty((values.shape[0], values.shape[1] + 2))
    out[:, 1:-1] = values
    out[:, 0] = 2.0 * values[:, 0] - values[:, 1]
    out[:, -1] = 2.0 * values[:, -1] - values[:, -2]
    return out


def extend_xy(values: np.ndarray) -> np.ndarray:
    """Ghost border in both directions (x first, then y; the order commutes)."""
    return extend_y(extend_x(values))


def ghost_extrapolate(surface: Surface) -> np.ndarray:
    """Full ghost-bordered array for a surface: shape (M+3, N+3).

    Row 0 / column 0 hold the fictitious indices -1; the last row/column hold
    M+1 / N+1.  Interior entry [m+1, n+1] equals the surface value at (m, n).
    """
    if surface.values.shape[0] < 3 or surface.values.shape[1] < 3:
        raise DomainError("ghost extrapolation needs at least 3 nodes per direction")
    return extend_xy(surface.values)


# ---------------------------------------------------------------------------
# Explicit operator applications
# ---------------------------------------------------------------------------

def apply_adx(
    surface: Surface,
    grid: Grid,
    params: MarketParams,
    cfg: OperatorConfig = DEFAULT_CONFIG,
) -> Surface:
    """Centered discretization of A_x applied along every x-line."""
    check_surface(surface, grid)
    lower, diag, upper = line_coefficients(
        params.sigma1, params.r, grid.x_nodes, grid.dx, cfg.theta
    )
    ext = extend_x(surface.values)
    out = (
        lower[:, None] * ext[:-2]
        + diag[:, None] * ext[1:-1]
        + upper[:, None] * ext[2:]
    )
    return Surface(values=out, time_index=surface.time_index)


def apply_ady(
    surface: Surface,
    grid: Grid,
    params: MarketParams,
    cfg: OperatorConfig = DEFAULT_CONFIG,
) -> Surface:
    """Centered discretization of A_y applied along every y-line."""
    check_surface(surface, grid)
    lower, diag, upper = line_coefficients(
        params.sigma2, params.r, grid.y_nodes, grid.dy, 1.0 - cfg.theta
    )
    ext = extend_y(surface.values)
    out = (
        lower[None, :] * ext[:, :-2]
        + diag[None, :] * ext[:, 1:-1]
        + upper[None, :] * ext[:, 2:]
    )
    return Surface(values=out, time_index=surface.time_index)


def apply_adxdy(surface: Surface, grid: Grid, params: MarketParams) -> Surface:
    """Four-point cross stencil for the mixed derivative term A_xy."""
    check_surface(surface, grid)
    coef = (
        params.sigma1
        * params.sigma2
        * params.rho
        * np.outer(grid.x_nodes, grid.y_nodes)
        / (4.0 * grid.dx * grid.dy)
    )
    ext = extend_xy(surface.values)
    out = coef * (ext[2:, 2:] - ext[2:, :-2] - ext[:-2, 2:] + ext[:-2, :-2])
    return Surface(values=out, time_index=surface.time_index)


# ---------------------------------------------------------------------------
# Tridiagonal systems
# ---------------------------------------------------------------------------

@dataclass
class TridiagonalSystem:
    """One line system: lower/diag/upper coefficient vectors and a right-hand side.

    All four vectors share the same length; lower[0] and upper[-1] are outside
    the matrix and must be zero.
    """

    lower: np.ndarray
    diag: np.ndarray
    upper: np.ndarray
    rhs: np.ndarray

    def __post_init__(self) -> None:
        self.lower = np.asarray(self.lower, dtype=float)
        self.diag = np.asarray(self.diag, dtype=float)
        self.upper = np.asarray(self.upper, dtype=float)
        self.rhs = np.asarray(self.rhs, dtype=float)
        n = self.diag.shape[0]
        if any(v.shape != (n,) for v in (self.lower, self.upper, self.rhs)):
            raise DomainError("tridiagonal vectors must all have equal length")
        if n < 1:
            raise DomainError("empty tridiagonal system")
        if self.lower[0] != 0.0 or self.upper[-1] != 0.0:
            raise DomainError("lower[0] and upper[-1] must be zero")
        if np.any(self.diag == 0.0):
            raise SingularPivotError("zero entry on the assembled diagonal")


class TridiagonalFactorization:
    """Thomas (LU) factorization of one tridiagonal matrix, reusable across solves.

    The factorization is shared by every grid line of an implicit sweep, so it
    is computed once and applied to a whole block of right-hand sides.
    """

    def __init__(self, lower: np.ndarray, diag: np.ndarray, upper: np.ndarray):
        lower = np.asarray(lower, dtype=float)
        diag = np.asarray(diag, dtype=float)
        upper = np.asarray(upper, dtype=float)
        n = diag.shape[0]
        denom = np.empty(n)
        cprime = np.empty(max(n - 1, 0))
        denom[0] = diag[0]
        if abs(denom[0]) < _PIVOT_FLOOR:
            raise SingularPivotError("zero pivot at row 0")
        for i in range(1, n):
            cprime[i - 1] = upper[i - 1] / denom[i - 1]
            denom[i] = diag[i] - lower[i] * cprime[i - 1]
            if abs(denom[i]) < _PIVOT_FLOOR:
                raise SingularPivotError(f"zero pivot at row {i}")
        self.lower = lower
        self.diag = diag
        self.upper = upper
        self._denom = denom
        self._cprime = cprime

    @property
    def size(self) -> int:
        return self.diag.shape[0]

    def solve(self, rhs: np.ndarray) -> np.ndarray:
        """Solve A x = rhs; rhs may be a vector or an (n, k) block of columns."""
        b = np.asarray(rhs, dtype=float)
        squeeze = b.ndim == 1
        if squeeze:
            b = b[:, None]
        if b.shape[0] != self.size:
            raise DomainError(f"rhs length {b.shape[0]} != system size {self.size}")
        n = self.size
        work = np.empty_like(b)
        work[0] = b[0] / self._denom[0]
        for i in range(1, n):
            work[i] = (b[i] - self.lower[i] * work[i - 1]) / self._denom[i]
        out = np.empty_like(b)
        out[-1] = work[-1]
        for i in range(n - 2, -1, -1):
            out[i] = work[i] - self._cprime[i] * out[i + 1]
        return out[:, 0] if squeeze else out

    def apply(self, x: np.ndarray) -> np.ndarray:
        """Matrix-vector (or matrix-block) product A x, for residual checks."""
        v = np.asarray(x, dtype=float)
        squeeze = v.ndim == 1
        if squeeze:
            v = v[:, None]
        out = self.diag[:, None] * v
        out[1:] += self.lower[1:, None] * v[:-1]
        out[:-1] += self.upper[:-1, None] * v[1:]
        return out[:, 0] if squeeze else out


def solve_tridiagonal(system: TridiagonalSystem) -> np.ndarray:
    """Direct Thomas solve of one assembled line system."""
    return TridiagonalFactorization(system.lower, system.diag, system.upper).solve(
        system.rhs
    )


def implicit_sweep_factor(
    grid: Grid,
    params: MarketParams,
    cfg: OperatorConfig,
    axis: str,
) -> TridiagonalFactorization:
    """Factorization of (I - dt/2 * A_axis) with ghost relations eliminated.

    Substituting the ghost extrapolation into the first and last stencil rows
    keeps the matrix strictly tridiagonal while acting exactly like the
    ghost-extended operator:  row 0 becomes
    ``1 - dt/2*(diag0 + 2*lower0)`` on the diagonal and
    ``-dt/2*(upper0 - lower0)`` above it, and symmetrically at row M.
    """
    if axis == "x":
        lo, di, up = line_coefficients(
            params.sigma1, params.r, grid.x_nodes, grid.dx, cfg.theta
        )
    elif axis == "y":
        lo, di, up = line_coefficients(
            params.sigma2, params.r, grid.y_nodes, grid.dy, 1.0 - cfg.theta
        )
    else:
        raise DomainError(f"axis must be 'x' or 'y', got {axis!r}")
    w = 0.5 * grid.dt
    lower = -w * lo
    diag = 1.0 - w * di
    upper = -w * up
    diag[0] += 2.0 * lower[0]
    upper[0] -= lower[0]
    diag[-1] += 2.0 * upper[-1]
    lower[-1] -= upper[-1]
    lower[0] = 0.0
    upper[-1] = 0.0
    return TridiagonalFactorization(lower, diag, upper)
