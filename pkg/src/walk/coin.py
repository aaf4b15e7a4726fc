"""
Time-inhomogeneous coin operators C_n of the (lambda, zeta) family
"""
from dataclasses import dataclass
from typing import List

import numpy as np

from .params import WalkParams


def coin_parameter(n: int, lam: float, zeta: float) -> float:
    """
    Turning parameter mu_n = min(lam * n^-zeta, 1)

    The clamp keeps C_n defined when lam / n^zeta > 1 (e.g. lam=1.5 at n=1).
    """
    if n < 1:
        raise ValueError(f"time index n must be >= 1 (got {n})")
    if lam == 0:
        return 0.0
    return min(lam * float(n) ** (-zeta), 1.0)


def clamp_events(params: WalkParams) -> List[int]:
    """Steps n <= horizon where lam * n^-zeta exceeded 1 and was clamped"""
    if params.lam == 0:
        return []
    steps = np.arange(1, params.horizon + 1, dtype=float)
    raw = params.lam * steps ** (-params.zeta)
    return [int(n) for n in steps[raw > 1.0]]


@dataclass(frozen=True, eq=False)
class CoinOperator:
    """2x2 unitary applied at step `time_index`; acts by columns on kets"""
    entries: np.ndarray
    time_index: int

    def apply(self, coin_amplitudes: np.ndarray) -> np.ndarray:
        """Rotate amplitudes whose last axis is the coin (index 0 -> coin 1)"""
        return coin_amplitudes @ self.entries.T

    def unitarity_defect(self) -> float:
        """max |C^dagger C - I| entrywise"""
        product = self.entries.conj().T @ self.entries
        return float(np.max(np.abs(product - np.eye(2))))


def build_coin(n: int, lam: float, zeta: float) -> CoinOperator:
    """
    C_n = [[sqrt(1-mu), sqrt(mu)], [sqrt(mu), -sqrt(1-mu)]]

    so that C|1> = sqrt(1-mu)|1> + sqrt(mu)|2> and C|2> = sqrt(mu)|1> - sqrt(1-mu)|2>.
    """
    mu = coin_parameter(n, lam, zeta)
    stay = np.sqrt(1.0 - mu)
    turn = np.sqrt(mu)
    entries = np.array([[stay, turn], [turn, -stay]], dtype=np.complex128)
    return CoinOperator(entries=entries, time_index=n)
