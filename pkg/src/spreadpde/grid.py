"""Uniform pricing lattice, payoff surfaces, bilinear spot queries, CSV export.

The truncated domain is [0, x_max] x [0, y_max] with x_max = y_max and equal
spacings dx = dy; time runs over l = 0..L with dt = T/L.  Surface values are
stored as an (M+1) x (N+1) array indexed [m, n] for the node (x_m, y_n).
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError


@dataclass(frozen=True)
class Grid:
    """Truncated uniform space-time lattice (square in space: M = N, dx = dy)."""

    x_max: float
    y_max: float
    M: int
    N: int
    L: int
    T: float

    def __post_init__(self) -> None:
        if not (self.x_max > 0.0 and math.isfinite(self.x_max)):
            raise DomainError(f"x_max must be positive, got {self.x_max}")
        if not (self.T > 0.0 and math.isfinite(self.T)):
            raise DomainError(f"T must be positive, got {self.T}")
        if self.M < 2:
            raise DomainError(f"M must be >= 2, got {self.M}")
        if self.L < 1:
            raise DomainError(f"L must be >= 1, got {self.L}")
        if self.N != self.M or self.y_max != self.x_max:
            raise DomainError("square lattice required: N = M and y_max = x_max")

    @property
    def dx(self) -> float:
        return self.x_max / self.M

    @property
    def dy(self) -> float:
        return self.y_max / self.N

    @property
    def dt(self) -> float:
        return self.T / self.L

    @property
    def x_nodes(self) -> np.ndarray:
        return np.arange(self.M + 1) * self.dx

    @property
    def y_nodes(self) -> np.ndarray:
        return np.arange(self.N + 1) * self.dy


def build_grid(x_max: float, M: int, L: int, T: float) -> Grid:
    """Square uniform lattice with N = M and y_max = x_max."""
    return Grid(x_max=x_max, y_max=x_max, M=M, N=M, L=L, T=T)


@dataclass
class Surface:
    """Values of a function of (x, y) on one time level of a grid."""

    values: np.ndarray
    time_index: int

    def __post_init__(self) -> None:
        self.values = np.asarray(self.values, dtype=float)
        if self.values.ndim != 2:
            raise DomainError("surface values must be a 2-d array")


@dataclass(frozen=True)
class SpreadPayoff:
    """Terminal payoff (S1 - S2 - k)^+; negative strikes are allowed."""

    k: float = 0.0

    def __post_init__(self) -> None:
        if not math.isfinite(self.k):
            raise DomainError(f"strike must be finite, got {self.k}")


def check_surface(surface: Surface, grid: Grid) -> None:
    """Raise unless the surface dimensions match the grid."""
    expected = (grid.M + 1, grid.N + 1)
    if surface.values.shape != expected:
        raise DomainError(
            f"surface shape {surface.values.shape} does not match grid {expected}"
        )


def payoff_surface(grid: Grid, payoff: SpreadPayoff) -> Surface:
    """Terminal surface values[m, n] = max(x_m - y_n - k, 0) at time index L."""
    x = grid.x_nodes[:, None]
    y = grid.y_nodes[None, :]
    return Surface(values=np.maximum(x - y - payoff.k, 0.0), time_index=grid.L)


def interpolate_at(surface: Surface, grid: Grid, S1: float, S2: float) -> float:
    """Bilinear interpolation over the enclosing cell; exact at nodes."""
    check_surface(surface, grid)
    if not (0.0 <= S1 <= grid.x_max) or not (0.0 <= S2 <= grid.y_max):
        raise DomainError(
            f"query ({S1}, {S2}) lies outside the truncated domain "
            f"[0, {grid.x_max}] x [0, {grid.y_max}]"
        )
    m = min(int(S1 / grid.dx), grid.M - 1)
    n = min(int(S2 / grid.dy), grid.N - 1)
    fx = S1 / grid.dx - m
    fy = S2 / grid.dy - n
    v = surface.values
    return float(
        (1.0 - fx) * (1.0 - fy) * v[m, n]
        + fx * (1.0 - fy) * v[m + 1, n]
        + (1.0 - fx) * fy * v[m, n + 1]
        + fx * fy * v[m + 1, n + 1]
    )


def write_surface_csv(path, surface: Surface, grid: Grid) -> None:
    r"""Write a surface as CSV: header ``x\y,y_0,...,y_N``, one row per x node.

    Values are written as the shortest decimal strings that parse back to the
    same doubles, so reading the file reproduces the surface exactly.
    """
    check_surface(surface, grid)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["x\\y"] + [_fmt(v) for v in grid.y_nodes])
        for m, x in enumerate(grid.x_nodes):
            writer.writerow([_fmt(x)] + [_fmt(v) for v in surface.values[m]])


def read_surface_csv(path) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Read a surface CSV back as (x_nodes, y_nodes, values)."""
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or not rows[0] or rows[0][0] != "x\\y":
        raise DomainError(f"{path} is not a surface CSV")
    y = np.array([float(v) for v in rows[0][1:]])
    x = np.array([float(r[0]) for r in rows[1:]])
    values = np.array([[float(v) for v in r[1:]] for r in rows[1:]])
    return x, y, values


def _fmt(v: float) -> str:
    return repr(float(v))
