"""
Experiment configuration
One KEY=VALUE file grammar (read with python-dotenv) shared by config files and CLI flags
"""
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any, Dict, Mapping, Optional

from dotenv import dotenv_values

from ..decoherence.exact import HorizonCapExceeded
from ..utils.config import Config
from ..walk.params import InitialState, MeasurementFamily, WalkParams


class Method(str, Enum):
    EXACT = 'exact'
    TRAJECTORY = 'trajectory'
    SIY = 'siy'
    CLASSICAL = 'classical'
    PURE = 'pure'


# Config file keys (case-insensitive) and what they set
CONFIG_KEYS = {
    'lambda': 'coin family scale lambda >= 0',
    'zeta': 'coin family exponent zeta >= 0',
    'p': 'decoherence strength in [0, 1]',
    't': 'horizon (positive integer)',
    'family': 'measurement family: total, coin or position',
    'init': "initial coin: basis:1, basis:2, symmetric, balanced or 'a1,a2'",
    'method': 'exact, trajectory, siy, classical or pure',
    'samples': "trajectory count, or 'n_sigma/n_I/n_Y' for siy",
    'n_sigma': 'siy schedules',
    'n_i': 'siy coin chains per schedule',
    'n_y': 'siy increment draws per chain',
    'gamma': 'rescaling exponent > 0',
    'alpha': 'tail level in (0, 1)',
    'seed': 'master seed (nonnegative integer)',
    'out': 'output CSV path',
    'workers': 'worker processes (0 = all CPUs)',
}


def read_config_values(path) -> Dict[str, str]:
    """Raw values of a KEY=VALUE file with lower-cased keys; unknown or empty keys are refused"""
    path = Path(path)
    if not path.is_file():
        raise ValueError(f"config file not found: {path}")
    values = {key.strip().lower(): value for key, value in dotenv_values(path).items()}
    errors = [f"unknown key '{key}'" for key in values if key not in CONFIG_KEYS]
    errors += [f"key '{key}' has no value" for key, value in values.items() if value is None]
    if errors:
        raise ValueError(f"Invalid experiment configuration in {path}: {'; '.join(errors)}")
    return values


@dataclass(frozen=True)
class ExperimentConfig:
    walk: WalkParams
    init: InitialState = field(default_factory=InitialState.balanced)
    method: Method = Method.EXACT
    samples: int = Config.DEFAULT_TRAJECTORIES
    n_sigma: int = Config.DEFAULT_N_SIGMA
    n_I: int = Config.DEFAULT_N_I
    n_Y: int = Config.DEFAULT_N_Y
    gamma: float = 1.0
    alpha: float = Config.TAIL_ALPHA
    seed: int = Config.DEFAULT_SEED
    output_path: Optional[Path] = None
    workers: int = Config.WORKERS

    def __post_init__(self):
        object.__setattr__(self, 'method', Method(self.method))
        if self.output_path is not None:
            object.__setattr__(self, 'output_path', Path(self.output_path))

    @property
    def resolved_output(self) -> Path:
        """Output CSV path; defaults to RESULTS_DIR/<method>_t<t>.csv"""
        if self.output_path is not None:
            return self.output_path
        return Config.RESULTS_DIR / f"{self.method.value}_t{self.walk.horizon}.csv"

    def validate(self) -> bool:
        """
        Check method/parameter compatibility before any compute

        Raises:
            HorizonCapExceeded: exact method above EXACT_MAX_HORIZON (alone)
            ValueError: every other problem, collected into one message
        """
        errors = []
        walk = self.walk

        if self.gamma <= 0:
            errors.append(f"gamma must be > 0 (got {self.gamma})")
        if not 0 < self.alpha < 1:
            errors.append(f"alpha must lie in (0, 1) (got {self.alpha})")
        if self.seed < 0:
            errors.append(f"seed must be >= 0 (got {self.seed})")
        if self.workers < 0:
            errors.append(f"workers must be >= 0 (got {self.workers})")

        if self.method is Method.TRAJECTORY and self.samples < 1:
            errors.append(f"trajectory method needs samples >= 1 (got {self.samples})")
        if self.method is Method.SIY:
            if walk.decoherence <= 0:
                errors.append("siy method needs p > 0 (use method 'pure' for p = 0)")
            if walk.measurement_family is not MeasurementFamily.TOTAL:
                errors.append("siy method only models the total measurement family")
            if self.init.basis_coin is None:
                errors.append("siy method needs a basis initial coin (init=basis:1 or basis:2)")
            if min(self.n_sigma, self.n_I, self.n_Y) < 1:
                errors.append(f"n_sigma, n_I and n_Y must be >= 1 (got {self.n_sigma}, {self.n_I}, {self.n_Y})")
        if self.method is Method.PURE and walk.decoherence != 0:
            errors.append(f"pure method models p = 0 (got p = {walk.decoherence}); use exact or trajectory")
        if self.method is Method.CLASSICAL:
            if walk.decoherence != 1:
                errors.append(f"classical method models p = 1 (got p = {walk.decoherence})")
            if walk.measurement_family is not MeasurementFamily.TOTAL:
                errors.append("classical method corresponds to the total measurement family")

        if errors:
            raise ValueError(f"Invalid experiment configuration: {'; '.join(errors)}")

        if self.method is Method.EXACT and walk.horizon > Config.EXACT_MAX_HORIZON:
            raise HorizonCapExceeded(
                f"Exact evolution is capped at t={Config.EXACT_MAX_HORIZON} (requested t={walk.horizon}); "
                f"use method 'trajectory' or 'siy', or raise EXACT_MAX_HORIZON"
            )
        return True

    def to_dict(self) -> Dict[str, Any]:
        """Flat record in the config-file key grammar"""
        return {
            **self.walk.to_dict(),
            'init': self.init.describe(),
            'method': self.method.value,
            'samples': self.samples,
            'n_sigma': self.n_sigma,
            'n_I': self.n_I,
            'n_Y': self.n_Y,
            'gamma': self.gamma,
            'alpha': self.alpha,
            'seed': self.seed,
            'out': str(self.resolved_output),
            'workers': self.workers,
        }

    @classmethod
    def from_mapping(cls, values: Mapping[str, Any]) -> 'ExperimentConfig':
        """
        Build a config from KEY=VALUE pairs (file grammar, case-insensitive keys)

        Unknown keys and unparsable values are collected and raised together.
        """
        settings = {str(key).strip().lower(): value for key, value in values.items() if value is not None}
        errors = [f"unknown key '{key}'" for key in settings if key not in CONFIG_KEYS]

        def convert(key, kind, default):
            if key not in settings:
                return default
            try:
                return kind(settings[key])
            except (TypeError, ValueError) as e:
                errors.append(f"{key}: cannot parse '{settings[key]}' ({e})")
                return default

        lam = convert('lambda', float, 0.5)
        zeta = convert('zeta', float, 1.0)
        p = convert('p', float, 0.0)
        horizon = convert('t', int, 100)
        family = convert('family', MeasurementFamily, MeasurementFamily.TOTAL)
        init = convert('init', InitialState.parse, InitialState.balanced())
        method = convert('method', Method, Method.EXACT)

        n_sigma = convert('n_sigma', int, Config.DEFAULT_N_SIGMA)
        n_I = convert('n_i', int, Config.DEFAULT_N_I)
        n_Y = convert('n_y', int, Config.DEFAULT_N_Y)
        samples = Config.DEFAULT_TRAJECTORIES
        if 'samples' in settings:
            text = str(settings['samples']).replace(',', '/')
            try:
                parts = [int(part) for part in text.split('/')]
                if len(parts) == 3:
                    n_sigma, n_I, n_Y = parts
                elif len(parts) == 1:
                    samples = parts[0]
                else:
                    raise ValueError("expected one integer or three separated by '/'")
            except ValueError as e:
                errors.append(f"samples: cannot parse '{settings['samples']}' ({e})")

        gamma = convert('gamma', float, 1.0)
        alpha = convert('alpha', float, Config.TAIL_ALPHA)
        seed = convert('seed', int, Config.DEFAULT_SEED)
        output_path = convert('out', Path, None)
        workers = convert('workers', int, Config.WORKERS)

        walk = None
        try:
            walk = WalkParams(lam=lam, zeta=zeta, decoherence=p, horizon=horizon, measurement_family=family)
        except ValueError as e:
            errors.append(str(e))

        if errors:
            raise ValueError(f"Invalid experiment configuration: {'; '.join(errors)}")

        return cls(walk=walk, init=init, method=method, samples=samples, n_sigma=n_sigma,
                   n_I=n_I, n_Y=n_Y, gamma=gamma, alpha=alpha, seed=seed,
                   output_path=output_path, workers=workers)

    @classmethod
    def from_file(cls, path, overrides: Optional[Mapping[str, Any]] = None) -> 'ExperimentConfig':
        """Read a KEY=VALUE file, then apply overrides (e.g. CLI flags) on top"""
        values = read_config_values(path)
        for key, value in (overrides or {}).items():
            if value is not None:
                values[key.lower()] = value
        return cls.from_mapping(values)
