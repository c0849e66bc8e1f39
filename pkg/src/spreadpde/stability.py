"""Frozen-coefficient Von Neumann diagnostics for the splitting scheme.

Inserting a Fourier mode into the scheme yields per-mode coefficients

    a1 = dt*sigma1^2*x^2/dx^2,   b1 = dt*r*x/(2*dx),   c1 = r*dt/2,
    a2 = dt*sigma2^2*y^2/dy^2,   b2 = dt*r*y/(2*dy),   c2 = dt*sigma1*sigma2*rho*x*y/(2*dx*dy),

and a closed-form squared amplification factor |g(theta, phi)|^2.  Freezing
the coefficients at x = y = x_max (which maximizes a1, the binding quantity)
gives grid-independent ratios

    C = a2/a1 = sigma2^2/sigma1^2,      C_hat = |c2|/a1 = |rho|*sigma2/(2*sigma1),

and the sufficient step bound

    a1 <= A = min{2/C_hat, 1/(1+2*C_hat), 1/(4*C_hat^2+2*C_hat)}
    <=> dt <= A*dx^2 / (max(sigma1^2, sigma2^2) * x_max^2).

The bound is sufficient, not necessary: violating it is reported, never
enforced; the calibrated production grids violate it yet march stably.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .closed_form import MarketParams
from .grid import Grid


@dataclass(frozen=True)
class StabilityReport:
    """Frozen-coefficient constants and the admissible time-step bound."""

    a1: float
    a2: float
    b1: float
    b2: float
    c1: float
    c2: float
    C: float
    C_hat: float
    A: float
    dt: float
    dt_max: float
    satisfied: bool


def bound_constant(C_hat: float) -> float:
    """A = min{2/C_hat, 1/(1+2*C_hat), 1/(4*C_hat^2+2*C_hat)}; equals 1 at C_hat = 0."""
    if C_hat < 0.0:
        raise ValueError(f"C_hat must be >= 0, got {C_hat}")
    if C_hat == 0.0:
        return 1.0
    return min(
        2.0 / C_hat,
        1.0 / (1.0 + 2.0 * C_hat),
        1.0 / (4.0 * C_hat * C_hat + 2.0 * C_hat),
    )


def stability_bound(grid: Grid, params: MarketParams) -> StabilityReport:
    """Evaluate the frozen-coefficient bound on the given grid and market."""
    dt = grid.dt
    dx = grid.dx
    dy = grid.dy
    x = grid.x_max
    y = grid.y_max
    a1 = dt * params.sigma1**2 * x**2 / dx**2
    a2 = dt * params.sigma2**2 * y**2 / dy**2
    b1 = dt * params.r * x / (2.0 * dx)
    b2 = dt * params.r * y / (2.0 * dy)
    c1 = 0.5 * params.r * dt
    c2 = dt * params.sigma1 * params.sigma2 * params.rho * x * y / (2.0 * dx * dy)
    if params.sigma1 > 0.0:
        C = params.sigma2**2 / params.sigma1**2
        C_hat = abs(params.rho) * params.sigma2 / (2.0 * params.sigma1)
    else:
        C = math.inf if params.sigma2 > 0.0 else 0.0
        C_hat = 0.0
    A = bound_constant(C_hat)
    sigma_max_sq = max(params.sigma1**2, params.sigma2**2)
    if sigma_max_sq > 0.0:
        dt_max = A * dx**2 / (sigma_max_sq * x**2)
    else:
        dt_max = math.inf
    return StabilityReport(
        a1=a1,
        a2=a2,
        b1=b1,
        b2=b2,
        c1=c1,
        c2=c2,
        C=C,
        C_hat=C_hat,
        A=A,
        dt=dt,
        dt_max=dt_max,
        satisfied=dt <= dt_max,
    )


def evaluate_amplification(
    theta,
    phi,
    a1: float,
    a2: float,
    b1: float = 0.0,
    b2: float = 0.0,
    c1: float = 0.0,
    c2: float = 0.0,
):
    """Squared amplification factor |g(theta, phi)|^2 of the splitting scheme.

    Accepts scalars or numpy arrays for theta/phi (broadcast together), so a
    whole diagnostic scan evaluates in one call.
    """
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    st2 = np.sin(0.5 * theta) ** 2
    sp2 = np.sin(0.5 * phi) ** 2
    st = np.sin(theta)
    sp = np.sin(phi)
    cross = c2 * st * sp
    num = ((1.0 - a1 * st2 - cross) ** 2 + b1**2 * st**2) * (
        (1.0 - a2 * sp2 - c1 - cross) ** 2 + b2**2 * sp**2
    )
    den = ((1.0 + a1 * st2) ** 2 + b1**2 * st**2) * (
        (1.0 + a2 * sp2 + c1) ** 2 + b2**2 * sp**2
    )
    out = num / den
    return float(out) if out.ndim == 0 else out


def amplification_grid_max(
    a1: float,
    a2: float,
    b1: float = 0.0,
    b2: float = 0.0,
    c1: float = 0.0,
    c2: float = 0.0,
    n: int = 101,
) -> float:
    """Max of |g|^2 over an n x n (theta, phi) grid covering [-pi, pi]^2."""
    angles = np.linspace(-math.pi, math.pi, n)
    theta, phi = np.meshgrid(angles, angles, indexing="ij")
    return float(np.max(evaluate_amplification(theta, phi, a1, a2, b1, b2, c1, c2)))
