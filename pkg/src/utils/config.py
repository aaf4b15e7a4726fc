"""
Configuration module for WalkLab
Loads environment variables and provides configuration settings
"""
import os
from pathlib import Path
from dotenv import load_dotenv

# Load environment variables from .env file
load_dotenv()


def parse_grid(spec: str) -> tuple:
    """Parse 'start:stop:step' (inclusive stop) or a comma list into a tuple of ints"""
    if ':' in spec:
        start, stop, step = (int(part) for part in spec.split(':'))
        return tuple(range(start, stop + 1, step))
    return tuple(int(part) for part in spec.split(',') if part.strip())


class Config:
    """Configuration class for the walk simulations"""

    # Exact density-operator evolution
    EXACT_MAX_HORIZON = int(os.getenv('EXACT_MAX_HORIZON', '300'))

    # Monte Carlo settings
    TRAJECTORY_BLOCK_SIZE = int(os.getenv('TRAJECTORY_BLOCK_SIZE', '2048'))
    KERNEL_CACHE_SIZE = int(os.getenv('KERNEL_CACHE_SIZE', '4096'))
    WORKERS = int(os.getenv('WORKERS', '1'))
    DEFAULT_SEED = int(os.getenv('DEFAULT_SEED', '20240101'))

    # Sampling scale of the sigma-I-Y estimator (schedules, coin chains, increments)
    DEFAULT_N_SIGMA = int(os.getenv('DEFAULT_N_SIGMA', '500'))
    DEFAULT_N_I = int(os.getenv('DEFAULT_N_I', '2000'))
    DEFAULT_N_Y = int(os.getenv('DEFAULT_N_Y', '500'))
    DEFAULT_TRAJECTORIES = int(os.getenv('DEFAULT_TRAJECTORIES', '200000'))

    # Statistics
    TAIL_ALPHA = float(os.getenv('TAIL_ALPHA', '0.03'))
    FIT_GRID = parse_grid(os.getenv('FIT_GRID', '100:2000:100'))

    # Logging Configuration
    LOG_LEVEL = os.getenv('LOG_LEVEL', 'INFO')
    LOG_FILE = os.getenv('LOG_FILE', 'logs/walklab.log')

    # Application Settings
    BASE_DIR = Path(__file__).resolve().parent.parent.parent
    LOGS_DIR = BASE_DIR / 'logs'
    RESULTS_DIR = Path(os.getenv('RESULTS_DIR', str(BASE_DIR / 'results')))

    @classmethod
    def validate(cls):
        """Validate configuration settings"""
        errors = []

        if cls.EXACT_MAX_HORIZON < 1:
            errors.append("EXACT_MAX_HORIZON must be >= 1")

        if cls.TRAJECTORY_BLOCK_SIZE < 1:
            errors.append("TRAJECTORY_BLOCK_SIZE must be >= 1")

        if cls.WORKERS < 1:
            errors.append("WORKERS must be >= 1")

        if not 0 < cls.TAIL_ALPHA < 1:
            errors.append("TAIL_ALPHA must lie in (0, 1)")

        if len(cls.FIT_GRID) < 3:
            errors.append("FIT_GRID needs at least 3 time points")

        if errors:
            raise ValueError(f"Configuration errors: {', '.join(errors)}")

        return True

    @classmethod
    def ensure_dirs(cls):
        """Ensure required directories exist"""
        cls.LOGS_DIR.mkdir(exist_ok=True)
        cls.RESULTS_DIR.mkdir(parents=True, exist_ok=True)


# Validate configuration on import
Config.validate()
Config.ensure_dirs()
