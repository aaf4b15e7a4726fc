"""
Pure-state (p = 0) evolution of the time-inhomogeneous walk
Amplitudes are stored densely on the window [-t, t] as an array of shape (2t+1, 2)
"""
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from ..analysis.distribution import Distribution
from ..utils.logger import get_logger
from .coin import CoinOperator, build_coin
from .params import InitialState, WalkParams

logger = get_logger(__name__)


@dataclass(frozen=True, eq=False)
class PureState:
    """psi_t; amplitudes[x + t, i - 1] = <x, i | psi_t>"""
    time: int
    amplitudes: np.ndarray

    def __post_init__(self):
        if self.amplitudes.shape != (2 * self.time + 1, 2):
            raise ValueError(
                f"amplitudes must have shape ({2 * self.time + 1}, 2) (got {self.amplitudes.shape})"
            )

    @classmethod
    def initial(cls, init: InitialState) -> 'PureState':
        return cls(time=0, amplitudes=np.array([init.coin_amplitudes], dtype=np.complex128))

    def norm_squared(self) -> float:
        return float(np.sum(np.abs(self.amplitudes) ** 2))

    def amplitude(self, x: int, coin: int) -> complex:
        if abs(x) > self.time:
            return 0j
        return complex(self.amplitudes[x + self.time, coin - 1])

    def respects_parity(self) -> bool:
        """Every supported position x satisfies x + t even"""
        return bool(np.all(self.amplitudes[1::2] == 0))


def shift(rotated: np.ndarray) -> np.ndarray:
    """
    Standard shift on a window: coin 1 moves +1, coin 2 moves -1

    Works on any leading batch axes; the position axis grows by 2.
    """
    shape = rotated.shape[:-2] + (rotated.shape[-2] + 2, 2)
    shifted = np.zeros(shape, dtype=rotated.dtype)
    shifted[..., 2:, 0] = rotated[..., :, 0]
    shifted[..., :-2, 1] = rotated[..., :, 1]
    return shifted


def apply_unitary_step(amplitudes: np.ndarray, coin: CoinOperator) -> np.ndarray:
    """U_n = S F_n on a window of amplitudes with shape (..., N, 2)"""
    return shift(coin.apply(amplitudes))


def step_pure(state: PureState, n: int, params: WalkParams) -> PureState:
    """Apply U_n = S F_n to psi_{n-1}"""
    if state.time != n - 1:
        raise ValueError(f"step {n} expects a state at time {n - 1} (got time {state.time})")
    coin = build_coin(n, params.lam, params.zeta)
    return PureState(time=n, amplitudes=apply_unitary_step(state.amplitudes, coin))


def iter_pure(init: InitialState, params: WalkParams) -> Iterator[PureState]:
    """Yield psi_1, ..., psi_t"""
    state = PureState.initial(init)
    for n in range(1, params.horizon + 1):
        state = step_pure(state, n, params)
        yield state


def evolve_pure(init: InitialState, params: WalkParams) -> PureState:
    """psi_t = U_t ... U_1 psi_0"""
    state = PureState.initial(init)
    for state in iter_pure(init, params):
        pass
    logger.debug(f"Pure evolution finished at t={state.time}, norm^2={state.norm_squared():.15f}")
    return state


def position_distribution(state: PureState) -> Distribution:
    """p_t(x) = sum_i |<x, i | psi_t>|^2"""
    masses = np.sum(np.abs(state.amplitudes) ** 2, axis=1)
    return Distribution(horizon=state.time, masses=masses)
