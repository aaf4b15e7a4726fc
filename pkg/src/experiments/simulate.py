"""
Single-point simulation: evolve or sample p_d(., t) and emit the result CSV
"""
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict

import pandas as pd

from ..analysis.distribution import Distribution, rescale
from ..analysis.tails import tail_epsilon
from ..classical.coin_turning import evolve_classical, gaussian_limit_variance, quoted_gaussian_variance
from ..decoherence.exact import evolve_exact
from ..decoherence.kraus import kraus_for
from ..decoherence.trajectory import mc_distribution
from ..siy.estimator import siy_estimate
from ..utils.logger import get_logger
from ..utils.seeding import RNG_ALGORITHM
from ..walk.coin import clamp_events
from ..walk.pure import evolve_pure, position_distribution
from .config import ExperimentConfig, Method
from .output import write_metadata, write_table

logger = get_logger(__name__)

STOCHASTIC_METHODS = (Method.TRAJECTORY, Method.SIY)


@dataclass(frozen=True, eq=False)
class SimulationResult:
    distribution: Distribution
    frame: pd.DataFrame
    csv_path: Path
    metadata_path: Path
    metadata: Dict[str, Any]


class SimulationRunner:
    """
    Runs one ExperimentConfig with the method it names
    """

    def __init__(self, config: ExperimentConfig):
        config.validate()
        self.config = config
        self.params = config.walk
        logger.info(
            f"Simulation runner initialized: method={config.method.value}, "
            f"lambda={self.params.lam}, zeta={self.params.zeta}, p={self.params.decoherence}, t={self.params.horizon}"
        )

    def compute(self) -> Distribution:
        config, params = self.config, self.params
        method = config.method

        if method is Method.EXACT:
            return evolve_exact(config.init, kraus_for(params), params)
        if method is Method.TRAJECTORY:
            return mc_distribution(config.init, kraus_for(params), params, config.samples,
                                   config.seed, workers=config.workers)
        if method is Method.SIY:
            return siy_estimate(config.init, params, config.n_sigma, config.n_I, config.n_Y,
                                config.seed, workers=config.workers)
        if method is Method.CLASSICAL:
            dist, _ = evolve_classical(config.init.coin_probabilities, params)
            return dist
        return position_distribution(evolve_pure(config.init, params))

    def summarize(self, dist: Distribution) -> Dict[str, Any]:
        params = self.params
        rescaled = rescale(dist, self.config.gamma)
        summary = {
            'total_mass': dist.total(),
            'rescaled_mean': rescaled.mean(),
            'rescaled_variance': rescaled.variance(),
            'alpha_t': tail_epsilon(dist, self.config.alpha).alpha_t,
        }
        if self.config.method is Method.CLASSICAL and 0 < params.zeta < 1 and params.lam > 0:
            summary['gaussian_limit_variance'] = gaussian_limit_variance(params.lam, params.zeta)
            summary['quoted_gaussian_variance'] = quoted_gaussian_variance(params.lam, params.zeta)
        return summary

    def run(self) -> SimulationResult:
        config = self.config
        started = time.perf_counter()
        events = clamp_events(self.params)
        if events:
            logger.warning(f"lambda * n^-zeta > 1 clamped to mu_n = 1 at steps {events}")

        dist = self.compute()
        wall_time = time.perf_counter() - started

        frame = dist.to_frame(config.gamma)
        csv_path = write_table(frame, config.resolved_output)
        metadata = {
            'config': config.to_dict(),
            'method': config.method.value,
            'clamp_events': events,
            'rng': RNG_ALGORITHM if config.method in STOCHASTIC_METHODS else None,
            'wall_time_s': wall_time,
            'estimator': dist.metadata,
            'summary': self.summarize(dist),
            'columns': list(frame.columns),
        }
        metadata_path = write_metadata(csv_path, metadata)
        logger.info(f"Simulation done in {wall_time:.2f}s -> {csv_path}")
        return SimulationResult(dist, frame, csv_path, metadata_path, metadata)


def run_simulate(config: ExperimentConfig) -> SimulationResult:
    return SimulationRunner(config).run()
