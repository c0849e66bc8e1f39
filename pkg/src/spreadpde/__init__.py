"""Two-asset spread option pricing under price impact.

A Peaceman-Rachford ADI engine for the linearized pricing equations, the
first-order illiquidity correction, Margrabe/Kirk closed-form benchmarks, a
Monte Carlo oracle, and Von Neumann stability diagnostics.
"""

from .adi import SolveResult, SourceTerm, compute_g, solve_full, solve_v0, step_v0, step_v1
from .closed_form import (
    MargrabeTerms,
    MarketParams,
    kirk_price,
    margrabe_price,
    margrabe_terms,
    norm_cdf,
)
from .config import RunConfig, load_config
from .errors import ConfigError, DomainError, InstabilityError, SingularPivotError
from .grid import (
    Grid,
    SpreadPayoff,
    Surface,
    build_grid,
    interpolate_at,
    payoff_surface,
    read_surface_csv,
    write_surface_csv,
)
from .impact import ImpactParams, lambda_hat
from .mc import RNG_ALGORITHM, McConfig, mc_spread_price
from .operators import (
    OperatorConfig,
    TridiagonalFactorization,
    TridiagonalSystem,
    apply_adx,
    apply_ady,
    apply_adxdy,
    ghost_extrapolate,
    implicit_sweep_factor,
    solve_tridiagonal,
)
from .stability import (
    StabilityReport,
    amplification_grid_max,
    evaluate_amplification,
    stability_bound,
)

__all__ = [
    "ConfigError",
    "DomainError",
    "Grid",
    "ImpactParams",
    "InstabilityError",
    "MargrabeTerms",
    "MarketParams",
    "McConfig",
    "OperatorConfig",
    "RNG_ALGORITHM",
    "RunConfig",
    "SingularPivotError",
    "SolveResult",
    "SourceTerm",
    "SpreadPayoff",
    "StabilityReport",
    "Surface",
    "TridiagonalFactorization",
    "TridiagonalSystem",
    "amplification_grid_max",
    "apply_adx",
    "apply_ady",
    "apply_adxdy",
    "build_grid",
    "compute_g",
    "evaluate_amplification",
    "ghost_extrapolate",
    "implicit_sweep_factor",
    "interpolate_at",
    "kirk_price",
    "lambda_hat",
    "load_config",
    "margrabe_price",
    "margrabe_terms",
    "mc_spread_price",
    "norm_cdf",
    "payoff_surface",
    "read_surface_csv",
    "solve_full",
    "solve_tridiagonal",
    "solve_v0",
    "stability_bound",
    "step_v0",
    "step_v1",
    "write_surface_csv",
]

__version__ = "0.1.0"
