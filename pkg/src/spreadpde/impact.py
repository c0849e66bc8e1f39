"""Price-impact shape function for trading in the first asset.

The impact coefficient factors as lambda = epsilon * lambda_hat, where the
normalized shape is a pure time profile gated by a hard price band:

    lambda_hat(t, S1) = 1 - exp(-beta*(T-t)^(3/2))   if s_low <= S1 <= s_high,
                        0                            otherwise.

The band indicator is applied as printed, with no smoothing at the edges.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError


@dataclass(frozen=True)
class ImpactParams:
    """Impact magnitude epsilon, decay coefficient beta, and the active price band."""

    epsilon: float = 0.01
    beta: float = 100.0
    s_low: float = 60.0
    s_high: float = 140.0

    def __post_init__(self) -> None:
        if not (self.epsilon >= 0.0 and math.isfinite(self.epsilon)):
            raise DomainError(f"epsilon must be >= 0, got {self.epsilon}")
        if not (self.beta >= 0.0 and math.isfinite(self.beta)):
            raise DomainError(f"beta must be >= 0, got {self.beta}")
        if not (0.0 <= self.s_low < self.s_high):
            raise DomainError(
                f"band must satisfy 0 <= s_low < s_high, got [{self.s_low}, {self.s_high}]"
            )


def lambda_hat(t: float, S1: float, T: float, p: ImpactParams) -> float:
    """Normalized impact shape at time t and first-asset price S1; range [0, 1)."""
    if not 0.0 <= t <= T:
        raise DomainError(f"t must lie in [0, T] = [0, {T}], got {t}")
    if not (p.s_low <= S1 <= p.s_high):
        return 0.0
    return 1.0 - math.exp(-p.beta * (T - t) ** 1.5)


def lambda_hat_profile(t: float, x_nodes: np.ndarray, T: float, p: ImpactParams) -> np.ndarray:
    """lambda_hat evaluated on a vector of S1 nodes (used when assembling sources)."""
    if not 0.0 <= t <= T:
        raise DomainError(f"t must lie in [0, T] = [0, {T}], got {t}")
    in_band = (x_nodes >= p.s_low) & (x_nodes <= p.s_high)
    return in_band * (1.0 - math.exp(-p.beta * (T - t) ** 1.5))
