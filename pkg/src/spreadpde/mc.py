"""Monte Carlo reference pricer for the perfectly liquid two-asset model.

Terminal prices are sampled exactly (no path discretization):

    S_i(T) = S_i * exp((r - sigma_i^2/2)*T + sigma_i*sqrt(T)*Z_i),
    corr(Z1, Z2) = rho via Cholesky,

so the only estimator error is statistical.  Randomness comes from the
counter-based Philox generator keyed per fixed-size batch, which makes the
estimate a pure function of (seed, n_paths): batches may be evaluated in any
order or in parallel and the reduction (running sums in batch order) does not
change.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .closed_form import MarketParams
from .errors import DomainError
from .grid import SpreadPayoff

RNG_ALGORITHM = "philox4x64"
_BATCH_SIZE = 1 << 17
_KEY_MASK = (1 << 64) - 1


@dataclass(frozen=True)
class McConfig:
    """Path count, seed, and the antithetic-pairing switch."""

    n_paths: int = 1_000_000
    seed: int = 12345
    antithetic: bool = False

    def __post_init__(self) -> None:
        if self.n_paths < 2:
            raise DomainError(f"n_paths must be >= 2, got {self.n_paths}")


def _batch_rng(seed: int, batch_index: int) -> np.random.Generator:
    key = (seed & _KEY_MASK, batch_index & _KEY_MASK)
    return np.random.Generator(np.random.Philox(key=key))


def mc_spread_price(
    S1: float,
    S2: float,
    payoff: SpreadPayoff,
    params: MarketParams,
    T: float,
    cfg: McConfig = McConfig(),
) -> tuple[float, float]:
    """Discounted spread-option price and its standard error.

    With antithetic pairing, draws come in (Z, -Z) pairs and the standard
    error is computed over pair averages; n_paths is rounded down to an even
    number of paths in that case.
    """
    if not (S1 > 0.0 and S2 > 0.0):
        raise DomainError("spots must be positive")
    if not (T > 0.0 and math.isfinite(T)):
        raise DomainError(f"T must be positive, got {T}")

    if cfg.antithetic:
        n_samples = cfg.n_paths // 2
        if n_samples < 1:
            raise DomainError("antithetic pricing needs at least 2 paths")
    else:
        n_samples = cfg.n_paths

    drift1 = (params.r - 0.5 * params.sigma1**2) * T
    drift2 = (params.r - 0.5 * params.sigma2**2) * T
    vol1 = params.sigma1 * math.sqrt(T)
    vol2 = params.sigma2 * math.sqrt(T)
    rho = params.rho
    rho_c = math.sqrt(max(1.0 - rho * rho, 0.0))

    def sample_payoff(z1: np.ndarray, z2: np.ndarray) -> np.ndarray:
        zc = rho * z1 + rho_c * z2
        a1 = S1 * np.exp(drift1 + vol1 * z1)
        a2 = S2 * np.exp(drift2 + vol2 * zc)
        return np.maximum(a1 - a2 - payoff.k, 0.0)

    # sums are taken of deviations from the first sample, which keeps the
    # variance exact (zero) for deterministic payoffs and well-conditioned
    # otherwise; accumulation order is fixed by the batch index
    offset = None
    dev_sum = 0.0
    dev_sq_sum = 0.0
    n_batches = (n_samples + _BATCH_SIZE - 1) // _BATCH_SIZE
    for batch in range(n_batches):
        count = min(_BATCH_SIZE, n_samples - batch * _BATCH_SIZE)
        rng = _batch_rng(cfg.seed, batch)
        z = rng.standard_normal((2, count))
        if cfg.antithetic:
            vals = 0.5 * (sample_payoff(z[0], z[1]) + sample_payoff(-z[0], -z[1]))
        else:
            vals = sample_payoff(z[0], z[1])
        if offset is None:
            offset = float(vals[0])
        dev = vals - offset
        dev_sum += float(dev.sum())
        dev_sq_sum += float((dev * dev).sum())

    disc = math.exp(-params.r * T)
    mean = offset + dev_sum / n_samples
    if n_samples > 1:
        var = max(dev_sq_sum - dev_sum * dev_sum / n_samples, 0.0) / (n_samples - 1)
    else:
        var = 0.0
    stderr = disc * math.sqrt(var / n_samples)
    return disc * mean, stderr
