"""Monte Carlo oracle: exact terminal sampling, determinism, variance reduction."""

import math

import pytest

from spreadpde import (
    DomainError,
    MarketParams,
    McConfig,
    SpreadPayoff,
    margrabe_price,
    mc_spread_price,
)


def _params(sigma1=0.15, sigma2=0.10, rho=0.5, r=0.05):
    return MarketParams(sigma1=sigma1, sigma2=sigma2, rho=rho, r=r)


def test_deterministic_paths_price_exactly():
    params = MarketParams(sigma1=0.0, sigma2=0.0, rho=0.0, r=0.05)
    T, k = 0.4, 5.0
    price, stderr = mc_spread_price(
        112.0, 104.0, SpreadPayoff(k), params, T, McConfig(n_paths=1000, seed=1)
    )
    growth = math.exp(params.r * T)
    expected = math.exp(-params.r * T) * max(112.0 * growth - 104.0 * growth - k, 0.0)
    assert price == pytest.approx(expected, rel=1e-14)
    assert stderr == 0.0


def test_same_seed_reproduces_bitwise():
    cfg = McConfig(n_paths=300_000, seed=987654321)  # spans several batches
    args = (112.0, 104.0, SpreadPayoff(2.0), _params(), 0.4, cfg)
    assert mc_spread_price(*args) == mc_spread_price(*args)


def test_antithetic_path_count_rounds_down_to_pairs():
    params = _params()
    odd = mc_spread_price(
        112.0, 104.0, SpreadPayoff(0.0), params, 0.4,
        McConfig(n_paths=10_001, seed=5, antithetic=True),
    )
    even = mc_spread_price(
        112.0, 104.0, SpreadPayoff(0.0), params, 0.4,
        McConfig(n_paths=10_000, seed=5, antithetic=True),
    )
    assert odd == even


def test_antithetic_reduces_standard_error():
    params = _params(rho=0.7)
    wins = 0
    for seed in range(20):
        _, plain = mc_spread_price(
            112.0, 104.0, SpreadPayoff(2.0), params, 0.4,
            McConfig(n_paths=20_000, seed=seed),
        )
        _, anti = mc_spread_price(
            112.0, 104.0, SpreadPayoff(2.0), params, 0.4,
            McConfig(n_paths=20_000, seed=seed, antithetic=True),
        )
        wins += anti <= plain
    assert wins >= 15


def test_exchange_option_matches_closed_form():
    # with strike 0 the discounted expectation is the Margrabe value for any rate
    params = _params(rho=0.5, r=0.04)
    price, stderr = mc_spread_price(
        112.0, 104.0, SpreadPayoff(0.0), params, 1.0, McConfig(n_paths=400_000, seed=77)
    )
    assert abs(price - margrabe_price(112.0, 104.0, params, 1.0)) <= 3.0 * stderr


def test_exchange_option_matches_pde_solver():
    # two independent methods priced with the same discounting convention
    from spreadpde import build_grid, interpolate_at, solve_v0

    params = _params(rho=0.5, r=0.05)
    payoff = SpreadPayoff(0.0)
    grid = build_grid(200.0, 200, 200, 1.0)
    pde = interpolate_at(solve_v0(grid, params, payoff)[0], grid, 112.0, 104.0)
    price, stderr = mc_spread_price(
        112.0, 104.0, payoff, params, 1.0, McConfig(n_paths=1_000_000, seed=4242)
    )
    assert abs(price - pde) <= 3.0 * stderr


def test_price_nonincreasing_in_strike_with_common_draws():
    params = _params()
    cfg = McConfig(n_paths=50_000, seed=1234)
    prices = [
        mc_spread_price(112.0, 104.0, SpreadPayoff(k), params, 0.4, cfg)[0]
        for k in (-2.0, 0.0, 2.0, 5.0, 10.0)
    ]
    # identical draws make per-path payoffs dominate pointwise
    assert all(a >= b for a, b in zip(prices, prices[1:]))


def test_preconditions():
    params = _params()
    with pytest.raises(DomainError):
        McConfig(n_paths=1)
    with pytest.raises(DomainError):
        mc_spread_price(-1.0, 104.0, SpreadPayoff(0.0), params, 0.4, McConfig())
    with pytest.raises(DomainError):
        mc_spread_price(112.0, 104.0, SpreadPayoff(0.0), params, 0.0, McConfig())
