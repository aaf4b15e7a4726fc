"""
Tail concentration statistics eps_t and alpha_t = eps_t / t
"""
from dataclasses import dataclass
from typing import Iterable, List, Tuple

import numpy as np

from .distribution import Distribution

# Absorbs rounding in the running sum so exact thresholds are met
_CUMSUM_SLACK = 1e-12


@dataclass(frozen=True)
class TailStats:
    horizon: int
    alpha: float
    epsilon_t: int

    @property
    def alpha_t(self) -> float:
        return self.epsilon_t / self.horizon


def tail_epsilon(dist: Distribution, alpha: float) -> TailStats:
    """
    eps_t = min{k : sum_{i=-t}^{-t+k} p(i, t) >= (1 - alpha) / 2}

    The scan starts at the left boundary -t; such k exists because the total mass is 1.
    """
    if not 0 < alpha < 1:
        raise ValueError(f"alpha must lie in (0, 1) (got {alpha})")
    target = (1.0 - alpha) / 2.0
    cumulative = np.cumsum(dist.masses)
    reached = np.flatnonzero(cumulative >= target - _CUMSUM_SLACK)
    epsilon = int(reached[0]) if reached.size else 2 * dist.horizon
    return TailStats(horizon=dist.horizon, alpha=alpha, epsilon_t=epsilon)


def alpha_series(snapshots: Iterable[Distribution], alpha: float) -> List[Tuple[int, float]]:
    """(t, alpha_t) for each distribution"""
    return [(dist.horizon, tail_epsilon(dist, alpha).alpha_t) for dist in snapshots]
