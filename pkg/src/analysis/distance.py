"""
Distances between walk distributions and against reference densities
"""
from enum import Enum
from typing import Tuple, Union

import numpy as np

from .distribution import Distribution, RescaledDistribution
from .reference import ReferenceDensity


class Metric(str, Enum):
    TV = 'tv'
    KS = 'ks'


Lattice = Union[Distribution, RescaledDistribution]


def _aligned(a: Lattice, b: Lattice) -> Tuple[np.ndarray, np.ndarray]:
    """Masses of both inputs on the union window [-T, T]; rescaled inputs must share gamma"""
    if isinstance(a, RescaledDistribution) and isinstance(b, RescaledDistribution) and a.gamma != b.gamma:
        raise ValueError(f"cannot compare distributions rescaled with different gamma ({a.gamma} vs {b.gamma})")
    if isinstance(a, RescaledDistribution) != isinstance(b, RescaledDistribution):
        raise ValueError("compare two plain distributions or two distributions rescaled with the same gamma")
    left = a.base if isinstance(a, RescaledDistribution) else a
    right = b.base if isinstance(b, RescaledDistribution) else b
    if isinstance(a, RescaledDistribution) and left.horizon != right.horizon:
        raise ValueError(f"rescaled supports differ (t={left.horizon} vs t={right.horizon})")

    horizon = max(left.horizon, right.horizon)
    padded = np.zeros((2, 2 * horizon + 1))
    padded[0, horizon - left.horizon:horizon + left.horizon + 1] = left.masses
    padded[1, horizon - right.horizon:horizon + right.horizon + 1] = right.masses
    return padded[0], padded[1]


def total_variation(a: Lattice, b: Lattice) -> float:
    """(1/2) sum_x |a(x) - b(x)|"""
    left, right = _aligned(a, b)
    return 0.5 * float(np.abs(left - right).sum())


def lattice_ks(a: Lattice, b: Lattice) -> float:
    """sup_x |A(x) - B(x)| between two lattice CDFs"""
    left, right = _aligned(a, b)
    return float(np.max(np.abs(np.cumsum(left) - np.cumsum(right))))


def ks_distance(dist: Lattice, reference: ReferenceDensity, gamma: float = 1.0) -> float:
    """sup over lattice midpoints of |empirical CDF - reference CDF|"""
    rescaled = dist if isinstance(dist, RescaledDistribution) else RescaledDistribution(dist, gamma)
    points, cdf = rescaled.midpoint_cdf()
    return float(np.max(np.abs(cdf - reference.cdf(points))))


def distribution_distance(a: Lattice, b: Union[Lattice, ReferenceDensity],
                          metric: Metric = Metric.TV) -> float:
    """
    TV or KS between two lattice distributions; KS against a continuous reference

    A plain Distribution compared against a reference is read at gamma = 1.
    """
    metric = Metric(metric)
    if isinstance(b, ReferenceDensity):
        if metric is not Metric.KS:
            raise ValueError("a continuous reference is compared with metric 'ks'")
        return ks_distance(a, b)
    if metric is Metric.TV:
        return total_variation(a, b)
    return lattice_ks(a, b)
