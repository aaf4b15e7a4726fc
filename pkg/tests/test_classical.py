"""
Classical coin-turning walk (the p = 1 limit)
"""
import numpy as np
import pytest

from src.analysis.distance import ks_distance
from src.analysis.distribution import rescale
from src.analysis.reference import ReferenceDensity
from src.classical.coin_turning import (UNIFORM_COIN, ClassicalState, classical_coin_matrix, classical_step,
                                        coin_turning_variance, evolve_classical, gaussian_limit_variance,
                                        iter_classical, quoted_gaussian_variance)
from src.walk.params import WalkParams


def test_coin_matrix_is_stochastic():
    for n in (1, 2, 10, 500):
        matrix = classical_coin_matrix(n, 1.5, 1.0)
        assert np.allclose(matrix.sum(axis=1), 1.0)
        assert np.all(matrix >= 0)


def test_walk_without_turning_is_bernoulli():
    params = WalkParams(lam=0.0, zeta=1.0, decoherence=1.0, horizon=40)
    dist, _ = evolve_classical(UNIFORM_COIN, params)
    assert dist.as_dict(tol=0.0) == pytest.approx({-40: 0.5, 40: 0.5})


def test_mass_and_parity_preserved():
    params = WalkParams(lam=0.9, zeta=0.7, decoherence=1.0, horizon=300)
    dist, state = evolve_classical((0.3, 0.7), params)
    assert abs(state.total() - 1.0) <= 1e-12
    assert abs(dist.total() - 1.0) <= 1e-9
    assert dist.respects_parity(tol=0.0)


@pytest.mark.parametrize('lam,zeta', [(0.5, 1.0), (1.0, 1.0), (1.5, 1.0), (0.5, 0.2), (0.5, 1.8)])
def test_velocity_recursion_matches_dp_variance(lam, zeta):
    params = WalkParams(lam=lam, zeta=zeta, decoherence=1.0, horizon=400)
    dist, _ = evolve_classical(UNIFORM_COIN, params)
    assert coin_turning_variance(params) == pytest.approx(dist.variance(), rel=1e-9)


def test_iter_classical_and_step_contract():
    params = WalkParams(lam=0.5, zeta=1.0, decoherence=1.0, horizon=8)
    assert [state.time for state in iter_classical(UNIFORM_COIN, params)] == list(range(1, 9))
    with pytest.raises(ValueError):
        classical_step(ClassicalState.initial(UNIFORM_COIN), 2, params)
    with pytest.raises(ValueError):
        ClassicalState.initial((0.6, 0.6))


def test_gaussian_regime_constant():
    lam, zeta = 0.5, 0.2
    limit = gaussian_limit_variance(lam, zeta)
    assert limit == pytest.approx(1 / 0.6)
    assert quoted_gaussian_variance(lam, zeta) == pytest.approx(2.5)

    gaps = []
    for t in (2000, 20000):
        rescaled = coin_turning_variance(WalkParams(lam=lam, zeta=zeta, decoherence=1.0, horizon=t)) / t ** 1.2
        gaps.append(abs(rescaled - limit))
        assert abs(rescaled - limit) < abs(rescaled - quoted_gaussian_variance(lam, zeta))
    assert gaps[1] < gaps[0]
    assert gaps[0] / limit < 0.15


def test_gaussian_regime_dp_rescaling():
    params = WalkParams(lam=0.5, zeta=0.2, decoherence=1.0, horizon=2000)
    dist, _ = evolve_classical(UNIFORM_COIN, params)
    rescaled = rescale(dist, 0.6)
    assert rescaled.variance() == pytest.approx(coin_turning_variance(params) / 2000 ** 1.2, rel=1e-9)


def test_gaussian_limit_requires_regime():
    with pytest.raises(ValueError):
        gaussian_limit_variance(0.5, 1.2)


@pytest.mark.parametrize('lam', [0.5, 1.0, 1.5])
def test_beta_limits(lam):
    params = WalkParams(lam=lam, zeta=1.0, decoherence=1.0, horizon=2000)
    dist, _ = evolve_classical(UNIFORM_COIN, params)
    rescaled = rescale(dist, 1.0)
    assert rescaled.second_moment() == pytest.approx(1 / (2 * lam + 1), rel=0.02)
    assert ks_distance(rescaled, ReferenceDensity.beta(lam)) <= 0.03
