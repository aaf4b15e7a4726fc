"""
Coin family, walk parameters and pure evolution
"""
import math

import numpy as np
import pytest

from conftest import random_init
from src.walk.coin import build_coin, clamp_events, coin_parameter
from src.walk.params import InitialState, MeasurementFamily, WalkParams
from src.walk.pure import PureState, evolve_pure, iter_pure, position_distribution, shift, step_pure


def test_coin_parameter_follows_power_law():
    assert coin_parameter(1, 0.5, 1.0) == pytest.approx(0.5)
    assert coin_parameter(4, 0.5, 1.0) == pytest.approx(0.125)
    assert coin_parameter(100, 1.0, 0.5) == pytest.approx(0.1)
    assert coin_parameter(7, 0.0, 1.0) == 0.0


def test_coin_parameter_clamps_at_one():
    assert coin_parameter(1, 1.5, 1.0) == 1.0
    assert coin_parameter(2, 1.5, 1.0) == pytest.approx(0.75)


def test_coin_parameter_rejects_time_zero():
    with pytest.raises(ValueError):
        coin_parameter(0, 0.5, 1.0)


def test_clamp_events_lists_clamped_steps():
    assert clamp_events(WalkParams(lam=1.5, zeta=1.0, horizon=10)) == [1]
    assert clamp_events(WalkParams(lam=3.0, zeta=1.0, horizon=10)) == [1, 2]
    assert clamp_events(WalkParams(lam=0.5, zeta=1.0, horizon=10)) == []


def test_hadamard_coin():
    coin = build_coin(5, 0.5, 0.0)
    expected = np.array([[1, 1], [1, -1]]) / math.sqrt(2)
    assert np.allclose(coin.entries, expected, atol=1e-15)


def test_coin_unitarity_across_family(rng):
    for _ in range(100):
        lam, zeta = rng.uniform(0, 3), rng.uniform(0, 3)
        n = int(rng.integers(1, 500))
        assert build_coin(n, lam, zeta).unitarity_defect() <= 1e-12


def test_walk_params_collect_errors():
    with pytest.raises(ValueError) as excinfo:
        WalkParams(lam=-1.0, zeta=-0.5, decoherence=1.5, horizon=0)
    message = str(excinfo.value)
    for fragment in ('lambda', 'zeta', 'decoherence', 'horizon'):
        assert fragment in message


def test_walk_params_derivations():
    params = WalkParams(lam=0.5, zeta=1.0, decoherence=0.2, horizon=10, measurement_family='coin')
    assert params.measurement_family is MeasurementFamily.COIN
    assert params.with_horizon(20).horizon == 20
    assert params.with_decoherence(0.7).decoherence == 0.7
    assert params.to_dict() == {'lambda': 0.5, 'zeta': 1.0, 'p': 0.2, 't': 10,
                                'shift': 'standard', 'family': 'coin'}


def test_initial_state_parsing():
    assert InitialState.parse('basis:1').basis_coin == 1
    assert InitialState.parse('basis:2').basis_coin == 2
    assert InitialState.parse('symmetric').coin_probabilities == pytest.approx((0.5, 0.5))
    custom = InitialState.parse('0.6,0.8j')
    assert custom.coin_amplitudes == (0.6 + 0j, 0.8j)
    assert custom.basis_coin is None
    assert InitialState.symmetric().describe() == 'symmetric'
    assert InitialState.basis(2).describe() == 'basis:2'


def test_balanced_state_parses_and_describes():
    balanced = InitialState.parse('balanced')
    assert balanced == InitialState.balanced()
    assert balanced.coin_amplitudes[1] == pytest.approx(1j / math.sqrt(2))
    assert balanced.basis_coin is None
    assert balanced.describe() == 'balanced'


def test_balanced_law_is_mean_of_basis_laws():
    params = WalkParams(lam=0.7, zeta=1.3, horizon=60)
    balanced = position_distribution(evolve_pure(InitialState.balanced(), params)).masses
    one = position_distribution(evolve_pure(InitialState.basis(1), params)).masses
    two = position_distribution(evolve_pure(InitialState.basis(2), params)).masses
    assert np.allclose(balanced, (one + two) / 2, atol=1e-12)
    assert np.allclose(balanced, balanced[::-1], atol=1e-12)


def test_initial_state_rejects_bad_input():
    with pytest.raises(ValueError):
        InitialState((1.0, 1.0))
    with pytest.raises(ValueError):
        InitialState.basis(3)
    with pytest.raises(ValueError):
        InitialState.parse('1,0,0')


def test_shift_moves_coins_in_opposite_directions():
    rotated = np.array([[[1.0, 2.0]]])  # batch of one, window of one position
    shifted = shift(rotated)
    assert shifted.shape == (1, 3, 2)
    assert shifted[0, 2, 0] == 1.0  # coin 1 -> x = +1
    assert shifted[0, 0, 1] == 2.0  # coin 2 -> x = -1
    assert np.count_nonzero(shifted) == 2


def test_first_step_from_coin_one(coin_one):
    params = WalkParams(lam=0.3, zeta=1.0, horizon=1)
    state = evolve_pure(coin_one, params)
    assert state.amplitude(1, 1) == pytest.approx(math.sqrt(0.7))
    assert state.amplitude(-1, 2) == pytest.approx(math.sqrt(0.3))
    assert position_distribution(state).as_dict() == pytest.approx({1: 0.7, -1: 0.3})


def test_hadamard_three_steps_drift_right(coin_one):
    dist = position_distribution(evolve_pure(coin_one, WalkParams(lam=0.5, zeta=0.0, horizon=3)))
    assert dist.as_dict(tol=1e-15) == pytest.approx({-3: 1 / 8, -1: 1 / 8, 1: 5 / 8, 3: 1 / 8})


def test_norm_and_parity_fuzz(rng):
    for _ in range(100):
        params = WalkParams(lam=rng.uniform(0, 2), zeta=rng.uniform(0, 2.5), horizon=int(rng.integers(1, 40)))
        state = evolve_pure(random_init(rng), params)
        assert abs(state.norm_squared() - 1.0) <= 1e-10
        assert state.respects_parity()
        dist = position_distribution(state)
        assert abs(dist.total() - 1.0) <= 1e-9
        assert dist.respects_parity(tol=0.0)


def test_iter_pure_yields_every_time(hadamard, coin_one):
    times = [state.time for state in iter_pure(coin_one, hadamard)]
    assert times == list(range(1, hadamard.horizon + 1))


def test_step_pure_checks_time(hadamard, coin_one):
    state = PureState.initial(coin_one)
    with pytest.raises(ValueError):
        step_pure(state, 2, hadamard)


def test_pure_walk_is_deterministic(rng):
    params = WalkParams(lam=0.7, zeta=1.2, horizon=60)
    init = random_init(rng)
    first = evolve_pure(init, params).amplitudes
    second = evolve_pure(init, params).amplitudes
    assert np.array_equal(first, second)


def test_hadamard_support_concentrates_inside_ballistic_edge():
    params = WalkParams(lam=0.5, zeta=0.0, horizon=2000)
    dist = position_distribution(evolve_pure(InitialState.symmetric(), params))
    edge = (1 / math.sqrt(2) + 0.05) * params.horizon
    outside = dist.masses[np.abs(dist.positions) > edge].sum()
    assert outside <= 0.01
