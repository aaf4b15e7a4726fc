"""
Exact density-operator evolution of the decoherent walk
rho is stored as an array of shape (2t+1, 2, 2t+1, 2) indexed by (x + t, i - 1, y + t, j - 1)
"""
import time
from dataclasses import dataclass
from typing import Iterator, Optional

import numpy as np

from ..analysis.distribution import Distribution
from ..utils.config import Config
from ..utils.logger import get_logger
from ..walk.coin import build_coin
from ..walk.params import InitialState, WalkParams
from .kraus import KrausFamily

logger = get_logger(__name__)


class HorizonCapExceeded(ValueError):
    """Raised when an exact evolution is requested beyond the configured horizon cap"""


@dataclass(frozen=True, eq=False)
class DensityOperator:
    time: int
    entries: np.ndarray

    def __post_init__(self):
        window = 2 * self.time + 1
        if self.entries.shape != (window, 2, window, 2):
            raise ValueError(
                f"entries must have shape ({window}, 2, {window}, 2) (got {self.entries.shape})"
            )

    @classmethod
    def initial(cls, init: InitialState) -> 'DensityOperator':
        """|0><0| (x) |Phi_0><Phi_0|"""
        phi = np.array(init.coin_amplitudes, dtype=np.complex128)
        return cls(time=0, entries=np.outer(phi, phi.conj()).reshape(1, 2, 1, 2))

    def matrix(self) -> np.ndarray:
        dim = 2 * (2 * self.time + 1)
        return self.entries.reshape(dim, dim)

    def trace(self) -> complex:
        return complex(np.trace(self.matrix()))

    def hermiticity_defect(self) -> float:
        matrix = self.matrix()
        return float(np.max(np.abs(matrix - matrix.conj().T)))

    def min_eigenvalue(self) -> float:
        """Smallest eigenvalue; O(dim^3), intended for small instances"""
        return float(np.linalg.eigvalsh(self.matrix()).min())

    def position_marginal(self) -> Distribution:
        """Tr[(|x><x| (x) I_c) rho]"""
        window = 2 * self.time + 1
        diagonal = np.real(self.matrix().diagonal()).reshape(window, 2)
        return Distribution(horizon=self.time, masses=diagonal.sum(axis=1))


def exact_step(rho: DensityOperator, n: int, kraus: KrausFamily, params: WalkParams) -> DensityOperator:
    """
    rho_n = (1-p) U rho U* + p D(U rho U*) with U = S F_n
    """
    if rho.time != n - 1:
        raise ValueError(f"step {n} expects rho at time {n - 1} (got time {rho.time})")
    coin = build_coin(n, params.lam, params.zeta).entries

    rotated = np.einsum('ab,xbyc->xayc', coin, rho.entries)
    rotated = np.einsum('xayc,dc->xayd', rotated, coin.conj())

    # Shift both the ket and the bra side: coin 1 lands two slots up in the
    # grown window, coin 2 keeps its slot index.
    window = rho.entries.shape[0]
    shifted = np.zeros((window + 2, 2, window + 2, 2), dtype=np.complex128)
    for a, row in ((0, 2), (1, 0)):
        for b, col in ((0, 2), (1, 0)):
            shifted[row:row + window, a, col:col + window, b] = rotated[:, a, :, b]

    return DensityOperator(time=n, entries=kraus.decohere(shifted))


def check_horizon(params: WalkParams, max_horizon: Optional[int] = None):
    cap = Config.EXACT_MAX_HORIZON if max_horizon is None else max_horizon
    if params.horizon > cap:
        raise HorizonCapExceeded(
            f"Exact evolution is capped at t={cap} (requested t={params.horizon}); "
            f"use method 'trajectory' or 'siy', or raise EXACT_MAX_HORIZON"
        )


def iter_density(init: InitialState, kraus: KrausFamily, params: WalkParams,
                 max_horizon: Optional[int] = None) -> Iterator[DensityOperator]:
    """Yield rho_1, ..., rho_t"""
    check_horizon(params, max_horizon)
    rho = DensityOperator.initial(init)
    for n in range(1, params.horizon + 1):
        rho = exact_step(rho, n, kraus, params)
        yield rho


def evolve_density(init: InitialState, kraus: KrausFamily, params: WalkParams,
                   max_horizon: Optional[int] = None) -> DensityOperator:
    """rho_t = L_t ... L_1 rho_0"""
    check_horizon(params, max_horizon)
    rho = DensityOperator.initial(init)
    for rho in iter_density(init, kraus, params, max_horizon=max_horizon):
        pass
    return rho


def evolve_exact(init: InitialState, kraus: KrausFamily, params: WalkParams,
                 max_horizon: Optional[int] = None) -> Distribution:
    """p_d(., t) from exact density-operator evolution"""
    started = time.perf_counter()
    logger.info(
        f"Exact evolution: t={params.horizon}, family={kraus.family.value}, p={kraus.strength}, "
        f"lambda={params.lam}, zeta={params.zeta}"
    )
    rho = evolve_density(init, kraus, params, max_horizon=max_horizon)
    dist = rho.position_marginal()
    logger.info(f"Exact evolution done in {time.perf_counter() - started:.2f}s (trace={rho.trace().real:.12f})")
    return dist
