"""
Sigma-I-Y Monte Carlo estimator of the totally decoherent walk

For each geometric schedule sigma, coin chains I run with the segment coin
marginals R as transition matrices, and for each chain the position is the sum of
independent increments Y drawn from the segment jump laws mu(. | I_k, I_{k+1}).
Averaging the indicator of the final position over Y, I and sigma gives p_d(x, t).
"""
import time
from typing import Optional, Sequence, Tuple

import numpy as np

from ..analysis.distribution import Distribution
from ..utils.logger import get_logger
from ..utils.parallel import map_tasks
from ..utils.seeding import RNG_ALGORITHM, substream
from ..walk.params import InitialState, WalkParams
from .kernel import coin_marginal_and_jump_law, segment_kernel
from .schedule import sample_schedule

logger = get_logger(__name__)

COMPONENT = 'siy'


def schedule_counts(start_coin: int, params: WalkParams, n_I: int, n_Y: int,
                    rng: np.random.Generator) -> np.ndarray:
    """
    Position histogram of n_I * n_Y draws under one sampled schedule

    Args:
        start_coin: Basis coin i_0 (1 or 2)
    """
    t = params.horizon
    schedule = sample_schedule(params.decoherence, t, rng)

    coins = np.full(n_I, start_coin - 1, dtype=np.int64)
    positions = np.zeros((n_I, n_Y), dtype=np.int64)
    for start, end in schedule.segments():
        marginal, law = coin_marginal_and_jump_law(segment_kernel(start, end, params))
        stay_first = marginal.entries[coins, 0]
        following = np.where(rng.random(n_I) < stay_first, 0, 1)
        positions += law.sample(coins, following, n_Y, rng)
        coins = following
    # An empty tail (sigma_{N_t} = t) contributes no segment: zero displacement, I_t = I_{N_t}

    return np.bincount(positions.ravel() + t, minlength=2 * t + 1)


def _schedule_task(task) -> np.ndarray:
    start_coin, params, n_I, n_Y, seed, index = task
    return schedule_counts(start_coin, params, n_I, n_Y, substream(seed, COMPONENT, index))


def merge_schedule_counts(per_schedule: Sequence[np.ndarray], per_draw: int) -> Tuple[np.ndarray, np.ndarray]:
    """
    Masses and between-schedule standard errors from per-schedule histograms

    Only integer sums of counts and squared counts enter, so the result does not
    depend on the order in which schedules are merged.
    """
    n_sigma = len(per_schedule)
    total = n_sigma * per_draw
    counts = np.sum(per_schedule, axis=0)
    masses = counts / total

    if n_sigma > 1:
        squares = sum(c.astype(object) ** 2 for c in per_schedule)
        between = (np.asarray(squares, dtype=float) / per_draw ** 2 - n_sigma * masses ** 2) / (n_sigma - 1)
        stderr = np.sqrt(np.clip(between, 0.0, None) / n_sigma)
    else:
        stderr = np.sqrt(masses * (1.0 - masses) / total)
    return masses, stderr


def siy_estimate(init: InitialState, params: WalkParams, n_sigma: int, n_I: int, n_Y: int,
                 seed: int, workers: Optional[int] = None) -> Distribution:
    """
    Estimate p_d(., t) for the Total family from a basis initial coin

    Standard errors are computed between schedules, the independent unit.
    """
    errors = []
    if params.decoherence <= 0:
        errors.append("p must be > 0 (p = 0 has no measurements; use method 'pure')")
    if min(n_sigma, n_I, n_Y) < 1:
        errors.append(f"n_sigma, n_I and n_Y must be >= 1 (got {n_sigma}, {n_I}, {n_Y})")
    if init.basis_coin is None:
        errors.append("the sigma-I-Y estimator needs a basis initial coin (basis:1 or basis:2)")
    if errors:
        raise ValueError(f"Invalid sigma-I-Y request: {'; '.join(errors)}")

    started = time.perf_counter()
    logger.info(
        f"Sigma-I-Y estimate: t={params.horizon}, p={params.decoherence}, lambda={params.lam}, "
        f"zeta={params.zeta}, n_sigma={n_sigma}, n_I={n_I}, n_Y={n_Y}"
    )
    tasks = [(init.basis_coin, params, n_I, n_Y, seed, index) for index in range(n_sigma)]
    per_schedule = map_tasks(_schedule_task, tasks, workers)

    masses, stderr = merge_schedule_counts(per_schedule, n_I * n_Y)

    logger.info(f"Sigma-I-Y estimate done in {time.perf_counter() - started:.2f}s")
    return Distribution(
        horizon=params.horizon, masses=masses, stderr=stderr,
        metadata={'method': 'siy', 'rng': RNG_ALGORITHM, 'seed': seed,
                  'n_sigma': n_sigma, 'n_I': n_I, 'n_Y': n_Y}
    )
