"""
Geometric measurement schedules sigma_1 < sigma_2 < ... <= t
"""
from dataclasses import dataclass
from typing import Iterable, List, Tuple

import numpy as np


@dataclass(frozen=True)
class MeasurementSchedule:
    """Measurement times up to the horizon; sigma_0 = 0 is implicit"""
    horizon: int
    sigma: Tuple[int, ...]

    def __post_init__(self):
        previous = 0
        for value in self.sigma:
            if value <= previous:
                raise ValueError(f"measurement times must be strictly increasing and positive: {self.sigma}")
            previous = value
        if previous > self.horizon:
            raise ValueError(f"last measurement {previous} exceeds horizon {self.horizon}")

    @property
    def count(self) -> int:
        """N_t"""
        return len(self.sigma)

    @property
    def last(self) -> int:
        """sigma_{N_t} (0 when nothing was measured)"""
        return self.sigma[-1] if self.sigma else 0

    def segments(self) -> List[Tuple[int, int]]:
        """
        (start, end] pieces tiling 1..t

        Measured segments (sigma_k, sigma_{k+1}] come first; the unmeasured tail
        (sigma_{N_t}, t] is appended only when it is non-empty.
        """
        bounds = (0,) + self.sigma
        pieces = list(zip(bounds[:-1], bounds[1:]))
        if self.last < self.horizon:
            pieces.append((self.last, self.horizon))
        return pieces


def schedule_from_draws(draws: Iterable[int], t: int) -> MeasurementSchedule:
    """Schedule from explicit inter-measurement gaps T_1, T_2, ... (must run past t)"""
    times = []
    current = 0
    for gap in draws:
        if gap < 1:
            raise ValueError(f"geometric gaps start at 1 (got {gap})")
        current += int(gap)
        if current > t:
            return MeasurementSchedule(horizon=t, sigma=tuple(times))
        times.append(current)
    raise ValueError(f"draws sum to {current}, which does not exceed t={t}")


def sample_schedule(p: float, t: int, rng: np.random.Generator) -> MeasurementSchedule:
    """
    Draw T_i ~ Geometric(p) on {1, 2, ...} until sigma exceeds t

    P(T = k) = p (1 - p)^(k - 1); p = 0 has no measurements at all and is refused.
    """
    if not 0.0 < p <= 1.0:
        raise ValueError(
            f"schedule sampling needs 0 < p <= 1 (got {p}); use pure evolution for p = 0"
        )
    batch = max(8, int(1.2 * p * t) + 8)
    times: List[int] = []
    current = 0
    while True:
        cumulative = current + np.cumsum(rng.geometric(p, size=batch))
        inside = cumulative[cumulative <= t]
        times.extend(int(value) for value in inside)
        if inside.size < cumulative.size:
            return MeasurementSchedule(horizon=t, sigma=tuple(times))
        current = int(cumulative[-1])
