"""Closed-form benchmark prices: Margrabe exchange options and Kirk's spread approximation.

Margrabe prices an exchange option (spread strike 0) exactly:

    C = S1*Phi(d+) - S2*Phi(d-),
    d+- = ln(S1/S2)/(sigma*sqrt(T)) +- sigma*sqrt(T)/2,
    sigma = sqrt(sigma1^2 + sigma2^2 - 2*rho*sigma1*sigma2).

Kirk extends this to nonzero strikes by treating S2 + k as a lognormal with
a moneyness-weighted effective volatility.  Both formulas are implemented on
spot inputs with no discount factor, exactly as commonly printed; the k = 0
Kirk price therefore coincides with Margrabe identically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError

_INV_SQRT2 = 1.0 / math.sqrt(2.0)


@dataclass(frozen=True)
class MarketParams:
    """Lognormal market inputs: per-asset volatilities, correlation, short rate."""

    sigma1: float
    sigma2: float
    rho: float
    r: float

    def __post_init__(self) -> None:
        if not (self.sigma1 >= 0.0 and math.isfinite(self.sigma1)):
            raise DomainError(f"sigma1 must be >= 0 and finite, got {self.sigma1}")
        if not (self.sigma2 >= 0.0 and math.isfinite(self.sigma2)):
            raise DomainError(f"sigma2 must be >= 0 and finite, got {self.sigma2}")
        if not -1.0 <= self.rho <= 1.0:
            raise DomainError(f"rho must lie in [-1, 1], got {self.rho}")
        if not (self.r >= 0.0 and math.isfinite(self.r)):
            raise DomainError(f"r must be >= 0 and finite, got {self.r}")


@dataclass(frozen=True)
class MargrabeTerms:
    """Standardized moneyness pair and the effective spread volatility."""

    d_plus: float
    d_minus: float
    sigma_eff: float


def norm_cdf(x: float) -> float:
    """Standard normal CDF via the complementary error function.

    Accurate to machine precision in both tails (well below the 1e-7
    budget the callers rely on).
    """
    if math.isnan(x):
        raise DomainError("norm_cdf requires a finite argument")
    return 0.5 * math.erfc(-x * _INV_SQRT2)


def effective_spread_vol(params: MarketParams) -> float:
    """sqrt(sigma1^2 + sigma2^2 - 2*rho*sigma1*sigma2), clipped at 0 for rounding."""
    var = (
        params.sigma1 * params.sigma1
        + params.sigma2 * params.sigma2
        - 2.0 * params.rho * params.sigma1 * params.sigma2
    )
    return math.sqrt(max(var, 0.0))


def margrabe_terms(S1: float, S2: float, params: MarketParams, T: float) -> MargrabeTerms:
    """d+/- and sigma_eff for the exchange option; requires sigma_eff > 0."""
    _check_margrabe_inputs(S1, S2, T)
    sigma_eff = effective_spread_vol(params)
    vol_sqrt_t = sigma_eff * math.sqrt(T)
    if vol_sqrt_t == 0.0:
        raise DomainError("degenerate spread volatility: d+/- are undefined")
    d_plus = math.log(S1 / S2) / vol_sqrt_t + 0.5 * vol_sqrt_t
    return MargrabeTerms(d_plus=d_plus, d_minus=d_plus - vol_sqrt_t, sigma_eff=sigma_eff)


def margrabe_price(S1: float, S2: float, params: MarketParams, T: float) -> float:
    """Exchange-option price S1*Phi(d+) - S2*Phi(d-).

    In the degenerate case sigma_eff = 0 the spread is deterministic and the
    limit value max(S1 - S2, 0) is returned.
    """
    _check_margrabe_inputs(S1, S2, T)
    sigma_eff = effective_spread_vol(params)
    if sigma_eff * math.sqrt(T) == 0.0:
        return max(S1 - S2, 0.0)
    terms = margrabe_terms(S1, S2, params, T)
    return S1 * norm_cdf(terms.d_plus) - S2 * norm_cdf(terms.d_minus)


def kirk_price(S1: float, S2: float, k: float, params: MarketParams, T: float) -> float:
    """Kirk's spread approximation on spot inputs, no discount factor.

    The effective volatility weights asset 2 by w = S2/(S2+k):

        sigma = sqrt(sigma1^2 + w^2*sigma2^2 - 2*w*rho*sigma1*sigma2),
        C = S1*Phi(d+) - (S2+k)*Phi(d-).

    At k = 0 this reduces identically to the Margrabe price.
    """
    _check_margrabe_inputs(S1, S2, T)
    if S2 + k <= 0.0:
        raise DomainError(f"S2 + k must be positive for Kirk's formula, got {S2 + k}")
    w = S2 / (S2 + k)
    var = (
        params.sigma1 * params.sigma1
        + w * w * params.sigma2 * params.sigma2
        - 2.0 * w * params.rho * params.sigma1 * params.sigma2
    )
    sigma = math.sqrt(max(var, 0.0))
    vol_sqrt_t = sigma * math.sqrt(T)
    if vol_sqrt_t == 0.0:
        return max(S1 - S2 - k, 0.0)
    d_plus = math.log(S1 / (S2 + k)) / vol_sqrt_t + 0.5 * vol_sqrt_t
    d_minus = d_plus - vol_sqrt_t
    return S1 * norm_cdf(d_plus) - (S2 + k) * norm_cdf(d_minus)


def _check_margrabe_inputs(S1: float, S2: float, T: float) -> None:
    if not (S1 > 0.0 and math.isfinite(S1)):
        raise DomainError(f"S1 must be positive, got {S1}")
    if not (S2 > 0.0 and math.isfinite(S2)):
        raise DomainError(f"S2 must be positive, got {S2}")
    if not (T > 0.0 and math.isfinite(T)):
        raise DomainError(f"T must be positive, got {T}")
