"""
Walk parameters and initial states
"""
import cmath
import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Tuple


class ShiftKind(str, Enum):
    """Shift operators; coin 1 moves +1, coin 2 moves -1"""
    STANDARD = 'standard'


class MeasurementFamily(str, Enum):
    """Basis in which a decoherence event measures the walker"""
    TOTAL = 'total'        # joint (position, coin) basis
    COIN = 'coin'          # coin basis only
    POSITION = 'position'  # position basis only


@dataclass(frozen=True)
class WalkParams:
    """
    Parameters of the time-inhomogeneous decoherent walk

    lam and zeta define the coin family mu_n = min(lam * n^-zeta, 1),
    decoherence is the per-step measurement probability p.
    """
    lam: float
    zeta: float
    decoherence: float = 0.0
    horizon: int = 1
    shift_kind: ShiftKind = ShiftKind.STANDARD
    measurement_family: MeasurementFamily = MeasurementFamily.TOTAL

    def __post_init__(self):
        errors = []
        if self.lam < 0:
            errors.append(f"lambda must be >= 0 (got {self.lam})")
        if self.zeta < 0:
            errors.append(f"zeta must be >= 0 (got {self.zeta})")
        if not 0.0 <= self.decoherence <= 1.0:
            errors.append(f"decoherence p must lie in [0, 1] (got {self.decoherence})")
        if int(self.horizon) != self.horizon or self.horizon < 1:
            errors.append(f"horizon must be a positive integer (got {self.horizon})")
        if errors:
            raise ValueError(f"Invalid walk parameters: {', '.join(errors)}")
        object.__setattr__(self, 'horizon', int(self.horizon))
        object.__setattr__(self, 'shift_kind', ShiftKind(self.shift_kind))
        object.__setattr__(self, 'measurement_family', MeasurementFamily(self.measurement_family))

    def with_horizon(self, horizon: int) -> 'WalkParams':
        return WalkParams(self.lam, self.zeta, self.decoherence, horizon,
                          self.shift_kind, self.measurement_family)

    def with_decoherence(self, p: float) -> 'WalkParams':
        return WalkParams(self.lam, self.zeta, p, self.horizon,
                          self.shift_kind, self.measurement_family)

    def to_dict(self) -> dict:
        return {
            'lambda': self.lam,
            'zeta': self.zeta,
            'p': self.decoherence,
            't': self.horizon,
            'shift': self.shift_kind.value,
            'family': self.measurement_family.value,
        }


@dataclass(frozen=True)
class InitialState:
    """Walker at position 0 with coin amplitudes (a1, a2)"""
    coin_amplitudes: Tuple[complex, complex]
    position: int = 0

    def __post_init__(self):
        a1, a2 = (complex(a) for a in self.coin_amplitudes)
        norm = abs(a1) ** 2 + abs(a2) ** 2
        if abs(norm - 1.0) > 1e-12:
            raise ValueError(f"Initial coin state must have unit norm (|a1|^2+|a2|^2 = {norm})")
        if self.position != 0:
            raise ValueError("Walks start at position 0")
        object.__setattr__(self, 'coin_amplitudes', (a1, a2))

    @classmethod
    def basis(cls, coin: int) -> 'InitialState':
        if coin not in (1, 2):
            raise ValueError(f"coin must be 1 or 2 (got {coin})")
        return cls((1.0, 0.0) if coin == 1 else (0.0, 1.0))

    @classmethod
    def symmetric(cls) -> 'InitialState':
        """(|0,1> + |0,2>) / sqrt(2)"""
        return cls((1 / math.sqrt(2), 1 / math.sqrt(2)))

    @classmethod
    def balanced(cls) -> 'InitialState':
        """
        (|0,1> + i|0,2>) / sqrt(2)

        The coins are real, so the two components never interfere: the position law is the
        mean of the basis:1 and basis:2 laws, which mirror each other.
        """
        return cls((1 / math.sqrt(2), 1j / math.sqrt(2)))

    @classmethod
    def parse(cls, text: str) -> 'InitialState':
        """
        Parse an initial state spec

        Accepted forms: 'basis:1', 'basis:2', 'symmetric', 'balanced', or 'a1,a2'
        with Python complex literals (e.g. '0.6,0.8j').
        """
        spec = text.strip().lower()
        if spec == 'symmetric':
            return cls.symmetric()
        if spec == 'balanced':
            return cls.balanced()
        if spec.startswith('basis:'):
            return cls.basis(int(spec.split(':', 1)[1]))
        parts = [part.strip() for part in spec.split(',')]
        if len(parts) != 2:
            raise ValueError(f"Cannot parse initial state '{text}'")
        return cls((complex(parts[0]), complex(parts[1])))

    @property
    def basis_coin(self) -> Optional[int]:
        """1 or 2 if the coin state is a basis vector up to phase, else None"""
        a1, a2 = self.coin_amplitudes
        if abs(a2) < 1e-12:
            return 1
        if abs(a1) < 1e-12:
            return 2
        return None

    @property
    def coin_probabilities(self) -> Tuple[float, float]:
        a1, a2 = self.coin_amplitudes
        return abs(a1) ** 2, abs(a2) ** 2

    def describe(self) -> str:
        a1, a2 = self.coin_amplitudes
        if self.basis_coin is not None:
            return f"basis:{self.basis_coin}"
        if cmath.isclose(a1, a2) and abs(a1.imag) < 1e-15:
            return 'symmetric'
        if cmath.isclose(a1 * 1j, a2) and abs(a1.imag) < 1e-15:
            return 'balanced'
        return f"{a1!r},{a2!r}"
