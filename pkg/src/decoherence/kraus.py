"""
Kraus measurement families of the decoherent walk

Each family is {A_0 = sqrt(1-p) I} plus sqrt(p) times the projectors of one basis:
Total -> |x,i><x,i|, Coin -> I (x) |i><i|, Position -> |x><x| (x) I.
Flat operator index on a window of half-width t is k = 2 (x + t) + (i - 1).
"""
from dataclasses import dataclass
from typing import List

import numpy as np

from ..walk.params import MeasurementFamily


@dataclass(frozen=True)
class KrausFamily:
    family: MeasurementFamily
    strength: float

    def __post_init__(self):
        if not 0.0 <= self.strength <= 1.0:
            raise ValueError(f"decoherence strength must lie in [0, 1] (got {self.strength})")
        object.__setattr__(self, 'family', MeasurementFamily(self.family))

    def keep_mask(self, window: int) -> np.ndarray:
        """
        Entries of rho over (x, i, y, j) that survive a measurement

        Args:
            window: Number of positions in the window (2t + 1)

        Returns:
            Boolean array of shape (window, 2, window, 2)
        """
        same_position = np.eye(window, dtype=bool)[:, None, :, None]
        same_coin = np.eye(2, dtype=bool)[None, :, None, :]
        if self.family is MeasurementFamily.TOTAL:
            return same_position & same_coin
        if self.family is MeasurementFamily.COIN:
            return np.broadcast_to(same_coin, (window, 2, window, 2))
        return np.broadcast_to(same_position, (window, 2, window, 2))

    def decohere(self, rho: np.ndarray) -> np.ndarray:
        """
        (1-p) rho + p D(rho) for rho of shape (N, 2, N, 2)

        D zeroes the blocks the family's measurement destroys; this equals
        sum_n A_n rho A_n^dagger over the whole Kraus set.
        """
        weights = np.where(self.keep_mask(rho.shape[0]), 1.0, 1.0 - self.strength)
        return rho * weights

    def operators(self, window: int) -> List[np.ndarray]:
        """Explicit Kraus matrices on a window (for completeness checks on small windows)"""
        dim = 2 * window
        ops = [np.sqrt(1.0 - self.strength) * np.eye(dim, dtype=np.complex128)]
        root = np.sqrt(self.strength)
        if self.family is MeasurementFamily.TOTAL:
            for k in range(dim):
                projector = np.zeros((dim, dim), dtype=np.complex128)
                projector[k, k] = 1.0
                ops.append(root * projector)
        elif self.family is MeasurementFamily.COIN:
            for coin in range(2):
                ops.append(root * np.kron(np.eye(window), np.diag([1.0 - coin, float(coin)])).astype(np.complex128))
        else:
            for x in range(window):
                position = np.zeros((window, window))
                position[x, x] = 1.0
                ops.append(root * np.kron(position, np.eye(2)).astype(np.complex128))
        return ops

    def completeness_defect(self, window: int) -> float:
        """max |sum A^dagger A - I| entrywise"""
        total = sum(op.conj().T @ op for op in self.operators(window))
        return float(np.max(np.abs(total - np.eye(2 * window))))


def kraus_for(params) -> KrausFamily:
    """Kraus family described by a WalkParams (family and p)"""
    return KrausFamily(family=params.measurement_family, strength=params.decoherence)
