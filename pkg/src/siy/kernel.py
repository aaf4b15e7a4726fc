"""
Segment kernels and their coin marginals / jump laws

For a segment (start, end] the kernel holds
    masses[i-1, x+L, j-1] = |<x, j| U_end ... U_{start+1} |0, i>|^2,   L = end - start,
anchored at position 0 by translation invariance of the walk.
"""
from dataclasses import dataclass
from functools import lru_cache
from typing import Tuple

import numpy as np

from ..utils.config import Config
from ..walk.coin import build_coin
from ..walk.params import WalkParams
from ..walk.pure import apply_unitary_step


@dataclass(frozen=True, eq=False)
class SegmentKernel:
    start: int
    end: int
    masses: np.ndarray

    @property
    def length(self) -> int:
        return self.end - self.start

    @property
    def displacements(self) -> np.ndarray:
        return np.arange(-self.length, self.length + 1)

    def mass(self, x: int, i: int, j: int) -> float:
        if abs(x) > self.length:
            return 0.0
        return float(self.masses[i - 1, x + self.length, j - 1])

    def row_sums(self) -> np.ndarray:
        """sum over (x, j) for each starting coin i; 1 by unitarity"""
        return self.masses.sum(axis=(1, 2))


@dataclass(frozen=True, eq=False)
class CoinMarginal:
    """R(i, j) = sum_x Q(x, i, j); a 2x2 stochastic matrix"""
    entries: np.ndarray

    def row_sums(self) -> np.ndarray:
        return self.entries.sum(axis=1)


@dataclass(frozen=True, eq=False)
class JumpLaw:
    """
    mu(x | i, j) = Q(x, i, j) / R(i, j) over `displacements`

    laws[i-1, j-1] is all zeros for cells with R(i, j) = 0; those are never sampled.
    """
    displacements: np.ndarray
    laws: np.ndarray

    def sample(self, start_coins: np.ndarray, end_coins: np.ndarray, draws: int,
               rng: np.random.Generator) -> np.ndarray:
        """
        Displacements for each coin transition

        Args:
            start_coins, end_coins: 0-based coins, one pair per chain
            draws: Independent increments per chain

        Returns:
            Integer array of shape (len(start_coins), draws)
        """
        out = np.zeros((start_coins.size, draws), dtype=np.int64)
        for a in range(2):
            for b in range(2):
                rows = np.flatnonzero((start_coins == a) & (end_coins == b))
                if not rows.size:
                    continue
                cdf = np.cumsum(self.laws[a, b])
                targets = rng.random((rows.size, draws)) * cdf[-1]
                chosen = np.minimum(np.searchsorted(cdf, targets, side='right'), cdf.size - 1)
                out[rows] = self.displacements[chosen]
        return out


def _propagate_basis(start: int, end: int, lam: float, zeta: float) -> np.ndarray:
    amps = np.zeros((2, 1, 2), dtype=np.complex128)
    amps[0, 0, 0] = 1.0
    amps[1, 0, 1] = 1.0
    for n in range(start + 1, end + 1):
        amps = apply_unitary_step(amps, build_coin(n, lam, zeta))
    masses = np.abs(amps) ** 2
    masses.setflags(write=False)
    return masses


# Coins depend only on n, so kernels can be shared across schedules
_cached_masses = lru_cache(maxsize=Config.KERNEL_CACHE_SIZE)(_propagate_basis)


def segment_kernel(start: int, end: int, params: WalkParams) -> SegmentKernel:
    """Q for (start, end] using coins C_{start+1}, ..., C_end"""
    if not 0 <= start < end <= params.horizon:
        raise ValueError(f"segment must satisfy 0 <= start < end <= t (got ({start}, {end}], t={params.horizon})")
    masses = _cached_masses(start, end, float(params.lam), float(params.zeta))
    return SegmentKernel(start=start, end=end, masses=masses)


def coin_marginal_and_jump_law(kernel: SegmentKernel) -> Tuple[CoinMarginal, JumpLaw]:
    """Split the kernel into the coin transition matrix R and conditional increment laws mu"""
    by_coins = kernel.masses.transpose(0, 2, 1)  # [i, j, x]
    marginal = by_coins.sum(axis=2)
    laws = np.zeros_like(by_coins)
    positive = marginal > 0
    laws[positive] = by_coins[positive] / marginal[positive][:, None]
    return CoinMarginal(entries=marginal), JumpLaw(displacements=kernel.displacements, laws=laws)
