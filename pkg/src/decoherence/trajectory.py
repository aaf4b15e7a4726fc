"""
Trajectory Monte Carlo for the decoherent walk

Each trajectory evolves a pure state; after every unitary step it is measured
in the family's basis with probability p and collapses onto the Born outcome.
Trajectories are simulated in vectorised blocks. Amplitudes live on a local
window around an anchor position that moves to the outcome of every
position-resolving measurement, so the window only spans the time since the
last collapse.
"""
import time
from typing import Optional, Tuple

import numpy as np

from ..analysis.distribution import Distribution
from ..utils.config import Config
from ..utils.logger import get_logger
from ..utils.parallel import map_tasks
from ..utils.seeding import RNG_ALGORITHM, substream
from ..walk.coin import build_coin
from ..walk.params import InitialState, MeasurementFamily, WalkParams
from ..walk.pure import apply_unitary_step
from .kraus import KrausFamily

logger = get_logger(__name__)

COMPONENT = 'trajectory'


def sample_rows(weights: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Draw one column index per row with probability proportional to the row's weights"""
    cumulative = np.cumsum(weights, axis=1)
    targets = rng.random(weights.shape[0]) * cumulative[:, -1]
    chosen = np.sum(cumulative <= targets[:, None], axis=1)
    # A target rounded up to the row total must not land on trailing zero weights
    last_positive = weights.shape[1] - 1 - np.argmax(weights[:, ::-1] > 0, axis=1)
    return np.minimum(chosen, last_positive)


def sample_trajectory_block(init: InitialState, kraus: KrausFamily, params: WalkParams,
                            size: int, rng: np.random.Generator) -> Tuple[np.ndarray, np.ndarray]:
    """
    Simulate `size` independent trajectories

    Returns:
        (positions, coins) at time t, coins in {1, 2}
    """
    anchors = np.zeros(size, dtype=np.int64)
    ages = np.zeros(size, dtype=np.int64)
    amps = np.tile(np.array(init.coin_amplitudes, dtype=np.complex128), (size, 1, 1))
    half = 0

    for n in range(1, params.horizon + 1):
        amps = apply_unitary_step(amps, build_coin(n, params.lam, params.zeta))
        half += 1
        ages += 1

        measured = np.flatnonzero(rng.random(size) < kraus.strength)
        if measured.size:
            probs = np.abs(amps[measured]) ** 2

            if kraus.family is MeasurementFamily.TOTAL:
                outcome = sample_rows(probs.reshape(measured.size, -1), rng)
                offset, coin = np.divmod(outcome, 2)
                amps[measured] = 0
                amps[measured, half, coin] = 1.0
                anchors[measured] += offset - half
                ages[measured] = 0

            elif kraus.family is MeasurementFamily.POSITION:
                offset = sample_rows(probs.sum(axis=2), rng)
                rows = amps[measured, offset, :]
                rows /= np.sqrt(np.sum(np.abs(rows) ** 2, axis=1))[:, None]
                amps[measured] = 0
                amps[measured, half, :] = rows
                anchors[measured] += offset - half
                ages[measured] = 0

            else:
                coin = sample_rows(probs.sum(axis=1), rng)
                kept = np.zeros_like(amps[measured])
                kept[np.arange(measured.size), :, coin] = amps[measured, :, coin]
                kept /= np.sqrt(np.sum(np.abs(kept) ** 2, axis=(1, 2)))[:, None, None]
                amps[measured] = kept

        # Support of every trajectory lies within +-age of its anchor
        needed = int(ages.max())
        if needed < half:
            amps = amps[:, half - needed:half + needed + 1, :]
            half = needed

    outcome = sample_rows((np.abs(amps) ** 2).reshape(size, -1), rng)
    offset, coin = np.divmod(outcome, 2)
    return anchors + offset - half, coin + 1


def sample_trajectory(init: InitialState, kraus: KrausFamily, params: WalkParams,
                      rng: np.random.Generator) -> Tuple[int, int]:
    """One trajectory; returns the final (position, coin)"""
    positions, coins = sample_trajectory_block(init, kraus, params, 1, rng)
    return int(positions[0]), int(coins[0])


def _block_counts(task) -> np.ndarray:
    """Position histogram of one block; module-level so worker processes can unpickle it"""
    init, kraus, params, size, seed, block_index = task
    rng = substream(seed, COMPONENT, block_index)
    positions, _ = sample_trajectory_block(init, kraus, params, size, rng)
    return np.bincount(positions + params.horizon, minlength=2 * params.horizon + 1)


def mc_distribution(init: InitialState, kraus: KrausFamily, params: WalkParams, samples: int,
                    seed: int, workers: Optional[int] = None,
                    block_size: Optional[int] = None) -> Distribution:
    """
    Empirical position law of `samples` trajectories with binomial standard errors

    Block b always uses substream (seed, 'trajectory', b) and counts are merged by
    integer addition, so the histogram does not depend on the worker count.
    """
    if samples < 1:
        raise ValueError(f"samples must be >= 1 (got {samples})")
    block = block_size or Config.TRAJECTORY_BLOCK_SIZE
    sizes = [block] * (samples // block)
    if samples % block:
        sizes.append(samples % block)
    tasks = [(init, kraus, params, size, seed, index) for index, size in enumerate(sizes)]

    started = time.perf_counter()
    logger.info(
        f"Trajectory MC: {samples} samples in {len(tasks)} blocks, t={params.horizon}, "
        f"family={kraus.family.value}, p={kraus.strength}"
    )
    counts = np.sum(map_tasks(_block_counts, tasks, workers), axis=0)
    logger.info(f"Trajectory MC done in {time.perf_counter() - started:.2f}s")

    return Distribution.from_counts(
        params.horizon, counts, samples,
        method='trajectory', rng=RNG_ALGORITHM, seed=seed, block_size=block
    )
