"""
Position distributions of the walk and their rescaled views
A Distribution stores masses on the window [-t, t] indexed by x + t
"""
from dataclasses import dataclass, field
from typing import Any, Dict, Optional

import numpy as np
import pandas as pd

CSV_COLUMNS = ['x', 'rescaled_x', 'prob', 'stderr']


@dataclass(frozen=True, eq=False)
class Distribution:
    """
    Mass function of the position at time `horizon`

    masses[k] is the probability of position k - horizon; stderr, when present,
    holds per-point Monte Carlo standard errors on the same index.
    """
    horizon: int
    masses: np.ndarray
    stderr: Optional[np.ndarray] = None
    metadata: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.horizon < 0:
            raise ValueError(f"horizon must be >= 0 (got {self.horizon})")
        masses = np.asarray(self.masses, dtype=float)
        if masses.shape != (2 * self.horizon + 1,):
            raise ValueError(
                f"masses must have length 2t+1 = {2 * self.horizon + 1} (got {masses.shape})"
            )
        object.__setattr__(self, 'masses', masses)
        if self.stderr is not None:
            object.__setattr__(self, 'stderr', np.asarray(self.stderr, dtype=float))

    @classmethod
    def from_counts(cls, horizon: int, counts: np.ndarray, samples: int, **metadata) -> 'Distribution':
        """Empirical histogram with binomial standard errors sqrt(p(1-p)/n)"""
        masses = np.asarray(counts, dtype=float) / samples
        stderr = np.sqrt(masses * (1.0 - masses) / samples)
        return cls(horizon=horizon, masses=masses, stderr=stderr, metadata=dict(metadata))

    @classmethod
    def from_frame(cls, frame: pd.DataFrame) -> 'Distribution':
        """Rebuild a distribution from a result table (columns x, prob[, stderr])"""
        positions = frame['x'].astype(int).to_numpy()
        horizon = int(np.abs(positions).max())
        masses = np.zeros(2 * horizon + 1)
        masses[positions + horizon] = frame['prob'].to_numpy(dtype=float)
        stderr = None
        if 'stderr' in frame and frame['stderr'].notna().any():
            stderr = np.zeros(2 * horizon + 1)
            stderr[positions + horizon] = frame['stderr'].fillna(0.0).to_numpy(dtype=float)
        return cls(horizon=horizon, masses=masses, stderr=stderr)

    @property
    def positions(self) -> np.ndarray:
        return np.arange(-self.horizon, self.horizon + 1)

    @property
    def parity_positions(self) -> np.ndarray:
        """Positions x in [-t, t] with x + t even"""
        return np.arange(-self.horizon, self.horizon + 1, 2)

    def total(self) -> float:
        return float(self.masses.sum())

    def mass_at(self, x: int) -> float:
        if abs(x) > self.horizon:
            return 0.0
        return float(self.masses[x + self.horizon])

    def as_dict(self, tol: float = 0.0) -> Dict[int, float]:
        """Support points with mass above tol"""
        return {int(x): float(m) for x, m in zip(self.positions, self.masses) if m > tol}

    def respects_parity(self, tol: float = 1e-15) -> bool:
        """True when no mass sits on positions with x + t odd"""
        return bool(np.all(np.abs(self.masses[1::2]) <= tol))

    def mean(self) -> float:
        return float(np.dot(self.positions, self.masses) / self.total())

    def variance(self) -> float:
        centred = self.positions - self.mean()
        return float(np.dot(centred ** 2, self.masses) / self.total())

    def second_moment(self) -> float:
        return float(np.dot(self.positions.astype(float) ** 2, self.masses) / self.total())

    def to_frame(self, gamma: float = 1.0) -> pd.DataFrame:
        """Result table over the parity lattice, sorted by x ascending"""
        index = self.parity_positions + self.horizon
        positions = self.parity_positions
        scale = float(self.horizon) ** gamma if self.horizon > 0 else 1.0
        stderr = self.stderr[index] if self.stderr is not None else np.full(len(index), np.nan)
        return pd.DataFrame({
            'x': positions,
            'rescaled_x': positions / scale,
            'prob': self.masses[index],
            'stderr': stderr,
        }, columns=CSV_COLUMNS)


@dataclass(frozen=True, eq=False)
class RescaledDistribution:
    """A Distribution viewed on the lattice Z / t^gamma; masses are not touched"""
    base: Distribution
    gamma: float

    @property
    def scale(self) -> float:
        return float(self.base.horizon) ** self.gamma

    @property
    def support(self) -> np.ndarray:
        return self.base.positions / self.scale

    @property
    def masses(self) -> np.ndarray:
        return self.base.masses

    def total(self) -> float:
        return self.base.total()

    def mean(self) -> float:
        return self.base.mean() / self.scale

    def variance(self) -> float:
        return self.base.variance() / self.scale ** 2

    def second_moment(self) -> float:
        return self.base.second_moment() / self.scale ** 2

    def mass_outside(self, radius: float) -> float:
        """Mass on rescaled points with |x| > radius"""
        return float(self.masses[np.abs(self.support) > radius].sum())

    def midpoint_cdf(self):
        """
        Empirical CDF evaluated between consecutive parity-lattice points

        Returns:
            (points, cdf): points = (x + 1) / t^gamma for every parity position x,
            cdf = mass on positions <= x
        """
        index = self.base.parity_positions + self.base.horizon
        cdf = np.cumsum(self.masses)[index] / self.total()
        points = (self.base.parity_positions + 1) / self.scale
        return points, cdf


def rescale(dist: Distribution, gamma: float) -> RescaledDistribution:
    """Relabel support point x as x / t^gamma"""
    if gamma <= 0:
        raise ValueError(f"gamma must be > 0 (got {gamma})")
    return RescaledDistribution(base=dist, gamma=float(gamma))
