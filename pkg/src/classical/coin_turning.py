"""
Classical (p = 1) time-inhomogeneous coin-turning walk
Exact dynamic programming over (position, coin) masses
"""
from dataclasses import dataclass
from typing import Iterator, Sequence, Tuple

import numpy as np

from ..analysis.distribution import Distribution
from ..utils.logger import get_logger
from ..walk.coin import coin_parameter
from ..walk.params import WalkParams
from ..walk.pure import shift

logger = get_logger(__name__)

UNIFORM_COIN = (0.5, 0.5)


def classical_coin_matrix(n: int, lam: float, zeta: float) -> np.ndarray:
    """[[1-mu_n, mu_n], [mu_n, 1-mu_n]]; row i holds P(next coin = j | coin = i)"""
    mu = coin_parameter(n, lam, zeta)
    return np.array([[1.0 - mu, mu], [mu, 1.0 - mu]])


@dataclass(frozen=True, eq=False)
class ClassicalState:
    """masses[x + t, i - 1] = P(X_t = x, coin = i)"""
    time: int
    masses: np.ndarray

    @classmethod
    def initial(cls, coin_probs: Sequence[float] = UNIFORM_COIN) -> 'ClassicalState':
        probs = np.asarray(coin_probs, dtype=float)
        if probs.shape != (2,) or np.any(probs < 0) or abs(probs.sum() - 1.0) > 1e-12:
            raise ValueError(f"coin distribution must be two nonnegative numbers summing to 1 (got {coin_probs})")
        return cls(time=0, masses=probs.reshape(1, 2))

    def total(self) -> float:
        return float(self.masses.sum())

    def position_marginal(self) -> Distribution:
        return Distribution(horizon=self.time, masses=self.masses.sum(axis=1))


def classical_step(state: ClassicalState, n: int, params: WalkParams) -> ClassicalState:
    """Turn the coin with the step-n matrix, then move +1 on coin 1 and -1 on coin 2"""
    if state.time != n - 1:
        raise ValueError(f"step {n} expects a state at time {n - 1} (got time {state.time})")
    turned = state.masses @ classical_coin_matrix(n, params.lam, params.zeta)
    return ClassicalState(time=n, masses=shift(turned))


def iter_classical(coin_probs: Sequence[float], params: WalkParams) -> Iterator[ClassicalState]:
    state = ClassicalState.initial(coin_probs)
    for n in range(1, params.horizon + 1):
        state = classical_step(state, n, params)
        yield state


def evolve_classical(coin_probs: Sequence[float], params: WalkParams) -> Tuple[Distribution, ClassicalState]:
    """Exact law at time t; returns the position marginal and the joint state"""
    state = ClassicalState.initial(coin_probs)
    for state in iter_classical(coin_probs, params):
        pass
    logger.debug(f"Classical DP finished at t={state.time}, mass drift={abs(state.total() - 1.0):.2e}")
    return state.position_marginal(), state


def coin_turning_variance(params: WalkParams) -> float:
    """
    Var(X_t) for the uniform-start walk, via velocity correlations

    With c_n = sum_{m<=n} E[V_m V_n] = 1 + (1 - 2 mu_n) c_{n-1} and c_0 = 0,
    Var(X_t) = sum_n (2 c_n - 1).
    """
    correlation = 0.0
    variance = 0.0
    for n in range(1, params.horizon + 1):
        correlation = 1.0 + (1.0 - 2.0 * coin_parameter(n, params.lam, params.zeta)) * correlation
        variance += 2.0 * correlation - 1.0
    return variance


def gaussian_limit_variance(lam: float, zeta: float) -> float:
    """Limit of Var(X_t) / t^(1+zeta) for 0 < zeta < 1: sum_n n^zeta / lam ~ t^(1+zeta) / (lam (1+zeta))"""
    if not 0 < zeta < 1 or lam <= 0:
        raise ValueError(f"Gaussian regime needs lambda > 0 and 0 < zeta < 1 (got {lam}, {zeta})")
    return 1.0 / (lam * (1.0 + zeta))


def quoted_gaussian_variance(lam: float, zeta: float) -> float:
    """1 / (lam (1 - zeta)), the constant quoted for the Gaussian regime; kept for reporting"""
    return 1.0 / (lam * (1.0 - zeta))
