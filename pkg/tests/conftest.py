"""
Shared fixtures
"""
import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

from src.walk.params import InitialState, WalkParams  # noqa: E402


def random_init(rng: np.random.Generator) -> InitialState:
    """Uniformly random normalized complex coin state"""
    raw = rng.normal(size=2) + 1j * rng.normal(size=2)
    raw /= np.linalg.norm(raw)
    return InitialState((complex(raw[0]), complex(raw[1])))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def hadamard():
    """lambda = 1/2, zeta = 0: every coin is the Hadamard matrix"""
    return WalkParams(lam=0.5, zeta=0.0, horizon=20)


@pytest.fixture
def coin_one():
    return InitialState.basis(1)
