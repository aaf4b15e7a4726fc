"""
Parameter sweeps over (lambda, zeta, p): statistic series over a time grid and decay fits
"""
import itertools
import time
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from ..analysis.distribution import Distribution, rescale
from ..analysis.regression import DecayModel, FitResult
from ..analysis.tails import tail_epsilon
from ..classical.coin_turning import iter_classical
from ..decoherence.exact import check_horizon, iter_density
from ..decoherence.kraus import kraus_for
from ..decoherence.trajectory import mc_distribution
from ..utils.config import Config
from ..utils.logger import get_logger
from ..utils.parallel import map_tasks
from ..utils.seeding import RNG_ALGORITHM
from ..walk.params import InitialState, MeasurementFamily, WalkParams
from ..walk.pure import iter_pure, position_distribution
from .fitting import COEFFICIENT_COLUMNS, coefficient_rows, fit_models, rate_ranges
from .output import write_metadata, write_table

logger = get_logger(__name__)

STATISTIC_COLUMNS = ['lambda', 'zeta', 'p', 't', 'statistic', 'value', 'error']


class Statistic(str, Enum):
    ALPHA_T = 'alpha_t'
    VARIANCE = 'variance'


def _span(start: float, stop: float, step: float) -> Tuple[float, ...]:
    """Inclusive decimal range rounded to 10 places"""
    count = int(round((stop - start) / step)) + 1
    return tuple(round(start + k * step, 10) for k in range(count))


def parse_values(text: str) -> Tuple[float, ...]:
    """'start:stop:step' (inclusive) or a comma list of reals"""
    text = str(text).strip()
    if ':' in text:
        start, stop, step = (float(part) for part in text.split(':'))
        if step <= 0 or stop < start:
            raise ValueError(f"span '{text}' needs step > 0 and stop >= start")
        return _span(start, stop, step)
    return tuple(float(part) for part in text.split(',') if part.strip())


@dataclass(frozen=True)
class SweepGrid:
    lams: Tuple[float, ...]
    zetas: Tuple[float, ...]
    ps: Tuple[float, ...]
    times: Tuple[int, ...] = Config.FIT_GRID
    family: MeasurementFamily = MeasurementFamily.TOTAL

    def __post_init__(self):
        errors = []
        for name in ('lams', 'zetas', 'ps', 'times'):
            if not getattr(self, name):
                errors.append(f"{name} is empty")
        times = tuple(int(t) for t in self.times)
        if times and (min(times) < 1 or list(times) != sorted(set(times))):
            errors.append(f"times must be strictly increasing positive integers (got {self.times})")
        if errors:
            raise ValueError(f"Invalid sweep grid: {'; '.join(errors)}")
        object.__setattr__(self, 'times', times)
        object.__setattr__(self, 'family', MeasurementFamily(self.family))

    @property
    def horizon(self) -> int:
        return self.times[-1]

    def points(self) -> List[Tuple[float, float, float]]:
        return list(itertools.product(self.lams, self.zetas, self.ps))


@dataclass(frozen=True)
class SweepPreset:
    name: str
    grid: SweepGrid
    description: str
    statistic: Statistic = Statistic.ALPHA_T
    init: InitialState = field(default_factory=InitialState.balanced)


PRESETS: Dict[str, SweepPreset] = {
    preset.name: preset for preset in (
        SweepPreset('pure-lambda', SweepGrid(_span(0.5, 1.5, 0.1), (1.0,), (0.0,)),
                    'pure walk, zeta=1, lambda 0.5..1.5'),
        SweepPreset('pure-zeta', SweepGrid((0.5,), _span(1.0, 2.0, 0.1), (0.0,)),
                    'pure walk, lambda=0.5, zeta 1..2'),
        SweepPreset('turning-lambda', SweepGrid(_span(0.5, 1.5, 0.1), (1.5,), (1.0,)),
                    'coin turning walk (p=1), zeta=1.5, lambda 0.5..1.5'),
        SweepPreset('turning-zeta', SweepGrid((0.5,), _span(1.25, 2.25, 0.1), (1.0,)),
                    'coin turning walk (p=1), lambda=0.5, zeta 1.25..2.25'),
    )
}


def snapshot_method(params: WalkParams, max_horizon: Optional[int] = None) -> str:
    """Evolution used for a sweep point: pure, classical, exact or trajectory"""
    if params.decoherence == 0:
        return 'pure'
    if params.decoherence == 1 and params.measurement_family is MeasurementFamily.TOTAL:
        return 'classical'
    try:
        check_horizon(params, max_horizon)
        return 'exact'
    except ValueError:
        return 'trajectory'


def iter_snapshots(init: InitialState, params: WalkParams, times: Sequence[int],
                   samples: int, seed: int) -> Iterator[Distribution]:
    """
    Position laws at each grid time, from one evolution where the method allows it

    p = 1 (total family) uses the coin-turning DP started from the initial coin
    probabilities. Trajectory points above the exact cap are sampled per grid time
    with the same master seed.
    """
    wanted = set(times)
    method = snapshot_method(params)

    if method == 'trajectory':
        kraus = kraus_for(params)
        for t in times:
            yield mc_distribution(init, kraus, params.with_horizon(t), samples, seed, workers=1)
        return

    if method == 'pure':
        states = (position_distribution(state) for state in iter_pure(init, params))
    elif method == 'classical':
        states = (state.position_marginal() for state in iter_classical(init.coin_probabilities, params))
    else:
        states = (rho.position_marginal() for rho in iter_density(init, kraus_for(params), params))

    for dist in states:
        if dist.horizon in wanted:
            yield dist


def evaluate_statistic(dist: Distribution, statistic: Statistic, alpha: float, gamma: float) -> float:
    if statistic is Statistic.ALPHA_T:
        return tail_epsilon(dist, alpha).alpha_t
    return rescale(dist, gamma).variance()


@dataclass
class PointOutcome:
    lam: float
    zeta: float
    p: float
    method: str = ''
    series: List[Tuple[int, float]] = field(default_factory=list)
    fits: Dict[DecayModel, FitResult] = field(default_factory=dict)
    error: Optional[str] = None
    stage: Optional[str] = None


def _sweep_point(task) -> PointOutcome:
    """One grid point; exceptions are recorded on the outcome so the sweep continues"""
    (lam, zeta, p), grid, statistic, init, alpha, gamma, fit, samples, seed = task
    outcome = PointOutcome(lam, zeta, p)
    stage = 'evolve'
    try:
        params = WalkParams(lam=lam, zeta=zeta, decoherence=p, horizon=grid.horizon,
                            measurement_family=grid.family)
        outcome.method = snapshot_method(params)
        for dist in iter_snapshots(init, params, grid.times, samples, seed):
            outcome.series.append((dist.horizon, evaluate_statistic(dist, statistic, alpha, gamma)))
        if fit:
            stage = 'fit'
            outcome.fits = fit_models(outcome.series)
    except Exception as e:
        logger.warning(f"Sweep point lambda={lam}, zeta={zeta}, p={p} failed during {stage}: {e}")
        outcome.error, outcome.stage = f"{type(e).__name__}: {e}", stage
    return outcome


@dataclass(frozen=True, eq=False)
class SweepResult:
    statistics: pd.DataFrame
    coefficients: Optional[pd.DataFrame]
    failures: List[dict]
    paths: Dict[str, Path]

    def rate_ranges(self) -> Dict[float, Tuple[float, float]]:
        if self.coefficients is None:
            raise ValueError("sweep was run without fitting")
        return rate_ranges(self.coefficients)


class SweepRunner:
    """
    Runs a statistic over every (lambda, zeta, p) grid point, in parallel over points
    """

    def __init__(self, grid: SweepGrid, statistic: Statistic = Statistic.ALPHA_T,
                 init: Optional[InitialState] = None, alpha: float = Config.TAIL_ALPHA,
                 gamma: float = 1.0, fit: bool = True, samples: int = Config.DEFAULT_TRAJECTORIES,
                 seed: int = Config.DEFAULT_SEED, workers: Optional[int] = None):
        errors = []
        if not 0 < alpha < 1:
            errors.append(f"alpha must lie in (0, 1) (got {alpha})")
        if gamma <= 0:
            errors.append(f"gamma must be > 0 (got {gamma})")
        if samples < 1:
            errors.append(f"samples must be >= 1 (got {samples})")
        if fit and len(grid.times) < 3:
            errors.append("fitting needs at least 3 grid times")
        if errors:
            raise ValueError(f"Invalid sweep: {'; '.join(errors)}")

        self.grid = grid
        self.statistic = Statistic(statistic)
        self.init = init or InitialState.balanced()
        self.alpha = alpha
        self.gamma = gamma
        self.fit = fit
        self.samples = samples
        self.seed = seed
        self.workers = workers
        logger.info(
            f"Sweep runner initialized: {len(grid.points())} points, statistic={self.statistic.value}, "
            f"times {grid.times[0]}..{grid.horizon} ({len(grid.times)} points)"
        )

    def tasks(self) -> list:
        return [(point, self.grid, self.statistic, self.init, self.alpha, self.gamma,
                 self.fit, self.samples, self.seed) for point in self.grid.points()]

    def outcomes(self) -> List[PointOutcome]:
        return map_tasks(_sweep_point, self.tasks(), self.workers)

    def run(self, out_dir: Optional[Path] = None, name: str = 'sweep') -> SweepResult:
        started = time.perf_counter()
        outcomes = self.outcomes()

        stat_rows, coefficient_table, failures = [], [], []
        for outcome in outcomes:
            for t, value in outcome.series:
                stat_rows.append({'lambda': outcome.lam, 'zeta': outcome.zeta, 'p': outcome.p, 't': t,
                                  'statistic': self.statistic.value, 'value': value, 'error': None})
            if outcome.error is not None:
                failures.append({'lambda': outcome.lam, 'zeta': outcome.zeta, 'p': outcome.p,
                                 'stage': outcome.stage, 'message': outcome.error})
                if outcome.stage == 'evolve':
                    stat_rows.append({'lambda': outcome.lam, 'zeta': outcome.zeta, 'p': outcome.p, 't': np.nan,
                                      'statistic': self.statistic.value, 'value': np.nan,
                                      'error': outcome.error})
            if self.fit:
                if outcome.fits:
                    coefficient_table.extend(coefficient_rows(outcome.lam, outcome.zeta, outcome.p, outcome.fits))
                else:
                    coefficient_table.extend(
                        {'lambda': outcome.lam, 'zeta': outcome.zeta, 'p': outcome.p, 'model': model.value,
                         'c': np.nan, 'r': np.nan, 'r_squared': np.nan, 'rmse': np.nan, 'converged': False}
                        for model in DecayModel
                    )

        statistics = pd.DataFrame(stat_rows, columns=STATISTIC_COLUMNS)
        coefficients = pd.DataFrame(coefficient_table, columns=COEFFICIENT_COLUMNS) if self.fit else None
        wall_time = time.perf_counter() - started

        paths = {}
        if out_dir is not None:
            out_dir = Path(out_dir)
            paths['statistics'] = write_table(statistics, out_dir / f"{name}_statistics.csv")
            if coefficients is not None:
                paths['coefficients'] = write_table(coefficients, out_dir / f"{name}_coefficients.csv")
            paths['metadata'] = write_metadata(out_dir / f"{name}.csv", {
                'grid': {'lambda': list(self.grid.lams), 'zeta': list(self.grid.zetas),
                         'p': list(self.grid.ps), 't': list(self.grid.times),
                         'family': self.grid.family.value},
                'statistic': self.statistic.value,
                'alpha': self.alpha,
                'gamma': self.gamma,
                'init': self.init.describe(),
                'samples': self.samples,
                'seed': self.seed,
                'rng': RNG_ALGORITHM,
                'methods': {f"{o.lam},{o.zeta},{o.p}": o.method for o in outcomes},
                'rmse_dof': 'N-2',
                'failures': failures,
                'wall_time_s': wall_time,
            })

        if failures:
            logger.warning(f"Sweep finished with {len(failures)} failed points out of {len(outcomes)}")
        logger.info(f"Sweep done in {wall_time:.2f}s")
        return SweepResult(statistics, coefficients, failures, paths)


def run_sweep(grid: SweepGrid, statistic: Statistic = Statistic.ALPHA_T, out_dir: Optional[Path] = None,
              name: str = 'sweep', **options) -> SweepResult:
    return SweepRunner(grid, statistic, **options).run(out_dir, name)


def run_preset(name: str, out_dir: Optional[Path] = None, **options) -> SweepResult:
    """Run one of the preset sweeps"""
    if name not in PRESETS:
        raise ValueError(f"unknown preset '{name}' (choose from {', '.join(PRESETS)})")
    preset = PRESETS[name]
    logger.info(f"Running preset {name}: {preset.description}")
    if options.get('init') is None:
        options['init'] = preset.init
    return run_sweep(preset.grid, preset.statistic, out_dir=out_dir, name=name, **options)
