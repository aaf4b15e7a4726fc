"""
Reference limit densities for rescaled walk distributions
"""
import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Tuple

import numpy as np
from scipy import special, stats

KONNO_EDGE = 1.0 / math.sqrt(2.0)


class ReferenceKind(str, Enum):
    ARCSINE = 'arcsine'
    UNIFORM = 'uniform'
    SEMICIRCLE = 'semicircle'
    BETA = 'beta'
    GAUSSIAN = 'gaussian'
    KONNO = 'konno'


_BETA_SHAPES = {
    ReferenceKind.ARCSINE: 0.5,
    ReferenceKind.UNIFORM: 1.0,
    ReferenceKind.SEMICIRCLE: 1.5,
}


def log_beta_normalizer(lam: float) -> float:
    """log of Gamma(2 lam) / (2^(2 lam - 1) Gamma(lam)^2), the Beta(lam, lam) constant on [-1, 1]"""
    return float(special.gammaln(2.0 * lam) - (2.0 * lam - 1.0) * math.log(2.0) - 2.0 * special.gammaln(lam))


def konno_pdf(x):
    """1 / (pi (1 + x) sqrt(1 - 2 x^2)) on (-1/sqrt 2, 1/sqrt 2)"""
    x = np.asarray(x, dtype=float)
    inside = np.abs(x) < KONNO_EDGE
    safe = np.where(inside, x, 0.0)
    return np.where(inside, 1.0 / (math.pi * (1.0 + safe) * np.sqrt(1.0 - 2.0 * safe ** 2)), 0.0)


def konno_cdf(x):
    """Closed form through x = sin(theta) / sqrt 2"""
    theta = np.arcsin(np.clip(math.sqrt(2.0) * np.asarray(x, dtype=float), -1.0, 1.0))
    return (2.0 * np.arctan(math.sqrt(2.0) * np.tan(theta / 2.0) + 1.0) + math.pi / 4.0) / math.pi


def zhang_variance(p: float) -> float:
    """(p + 2 sqrt(1 + q^2) - 2) / p with q = 1 - p: rescaled (gamma = 1/2) variance of the decoherent Hadamard walk"""
    if not 0 < p <= 1:
        raise ValueError(f"p must lie in (0, 1] (got {p})")
    q = 1.0 - p
    return (p + 2.0 * math.sqrt(1.0 + q * q) - 2.0) / p


@dataclass(frozen=True)
class ReferenceDensity:
    kind: ReferenceKind
    lam: Optional[float] = None
    variance: Optional[float] = None

    def __post_init__(self):
        kind = ReferenceKind(self.kind)
        object.__setattr__(self, 'kind', kind)
        if kind is ReferenceKind.BETA and (self.lam is None or self.lam <= 0):
            raise ValueError("Beta reference needs lam > 0")
        if kind is ReferenceKind.GAUSSIAN and (self.variance is None or self.variance <= 0):
            raise ValueError("Gaussian reference needs variance > 0")

    @classmethod
    def beta(cls, lam: float) -> 'ReferenceDensity':
        return cls(ReferenceKind.BETA, lam=lam)

    @classmethod
    def gaussian(cls, variance: float) -> 'ReferenceDensity':
        return cls(ReferenceKind.GAUSSIAN, variance=variance)

    @classmethod
    def parse(cls, text: str) -> 'ReferenceDensity':
        """'arcsine', 'uniform', 'semicircle', 'konno', 'beta:<lam>' or 'gaussian:<variance>'"""
        name, _, argument = text.strip().lower().partition(':')
        kind = ReferenceKind(name)
        if kind is ReferenceKind.BETA:
            return cls.beta(float(argument))
        if kind is ReferenceKind.GAUSSIAN:
            return cls.gaussian(float(argument))
        if argument:
            raise ValueError(f"reference '{name}' takes no argument (got '{text}')")
        return cls(kind)

    @property
    def beta_shape(self) -> Optional[float]:
        """lam of the symmetric Beta(lam, lam) law on [-1, 1], if this is one"""
        if self.kind is ReferenceKind.BETA:
            return float(self.lam)
        return _BETA_SHAPES.get(self.kind)

    @property
    def support(self) -> Tuple[float, float]:
        if self.kind is ReferenceKind.GAUSSIAN:
            return -math.inf, math.inf
        if self.kind is ReferenceKind.KONNO:
            return -KONNO_EDGE, KONNO_EDGE
        return -1.0, 1.0

    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        if self.kind is ReferenceKind.GAUSSIAN:
            return stats.norm.pdf(x, scale=math.sqrt(self.variance))
        if self.kind is ReferenceKind.KONNO:
            return konno_pdf(x)
        lam = self.beta_shape
        inside = np.abs(x) < 1.0 if lam < 1 else np.abs(x) <= 1.0
        safe = np.where(inside, x, 0.0)
        log_density = log_beta_normalizer(lam) + (lam - 1.0) * np.log1p(-safe ** 2)
        return np.where(inside, np.exp(log_density), 0.0)

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        if self.kind is ReferenceKind.GAUSSIAN:
            return stats.norm.cdf(x, scale=math.sqrt(self.variance))
        if self.kind is ReferenceKind.KONNO:
            return konno_cdf(x)
        lam = self.beta_shape
        return stats.beta.cdf(x, lam, lam, loc=-1.0, scale=2.0)

    def describe(self) -> str:
        if self.kind is ReferenceKind.BETA:
            return f"beta({self.lam})"
        if self.kind is ReferenceKind.GAUSSIAN:
            return f"gaussian({self.variance})"
        return self.kind.value


def reference_pdf(kind: ReferenceDensity, x: float) -> float:
    """Density value at x (0 outside the support)"""
    return float(kind.pdf(x))
