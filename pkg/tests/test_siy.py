"""
Measurement schedules, segment kernels and the sigma-I-Y estimator
"""
import numpy as np
import pytest

from src.analysis.distance import total_variation
from src.classical.coin_turning import evolve_classical
from src.decoherence.exact import evolve_exact
from src.decoherence.kraus import kraus_for
from src.siy.estimator import merge_schedule_counts, schedule_counts, siy_estimate
from src.siy.kernel import coin_marginal_and_jump_law, segment_kernel
from src.siy.schedule import MeasurementSchedule, sample_schedule, schedule_from_draws
from src.utils.seeding import substream
from src.walk.params import InitialState, WalkParams
from src.walk.pure import evolve_pure


def test_schedule_from_draws_appends_tail():
    schedule = schedule_from_draws([3, 2, 10], t=8)
    assert schedule.sigma == (3, 5)
    assert schedule.count == 2
    assert schedule.segments() == [(0, 3), (3, 5), (5, 8)]


def test_schedule_ending_at_horizon_has_no_tail():
    schedule = schedule_from_draws([3, 5, 1], t=8)
    assert schedule.sigma == (3, 8)
    assert schedule.last == 8
    assert schedule.segments() == [(0, 3), (3, 8)]


def test_empty_schedule_is_one_unmeasured_segment():
    schedule = schedule_from_draws([12], t=8)
    assert schedule.count == 0 and schedule.last == 0
    assert schedule.segments() == [(0, 8)]


def test_schedule_validation():
    with pytest.raises(ValueError):
        schedule_from_draws([2, 0, 9], t=8)
    with pytest.raises(ValueError):
        schedule_from_draws([2, 3], t=8)
    with pytest.raises(ValueError):
        MeasurementSchedule(horizon=5, sigma=(2, 2))
    with pytest.raises(ValueError):
        MeasurementSchedule(horizon=5, sigma=(2, 6))


def test_sample_schedule_at_full_decoherence_measures_every_step(rng):
    schedule = sample_schedule(1.0, 25, rng)
    assert schedule.sigma == tuple(range(1, 26))
    assert all(end - start == 1 for start, end in schedule.segments())


def test_sample_schedule_rejects_p_zero(rng):
    with pytest.raises(ValueError):
        sample_schedule(0.0, 10, rng)


def test_sample_schedule_rate(rng):
    counts = [sample_schedule(0.3, 1000, rng).count for _ in range(200)]
    assert np.mean(counts) == pytest.approx(300, rel=0.05)
    schedule = sample_schedule(0.3, 1000, rng)
    assert all(a < b for a, b in zip(schedule.sigma, schedule.sigma[1:]))
    assert schedule.last <= 1000


def test_kernel_of_one_step():
    params = WalkParams(lam=0.5, zeta=1.0, decoherence=0.5, horizon=10)
    kernel = segment_kernel(1, 2, params)  # coin C_2 with mu = 0.25
    assert kernel.mass(1, 1, 1) == pytest.approx(0.75)
    assert kernel.mass(-1, 1, 2) == pytest.approx(0.25)
    assert kernel.mass(1, 2, 1) == pytest.approx(0.25)
    assert kernel.mass(-1, 2, 2) == pytest.approx(0.75)
    assert kernel.mass(0, 1, 1) == 0.0


def test_kernel_matches_pure_walk_from_basis_coin():
    params = WalkParams(lam=0.7, zeta=0.8, decoherence=0.5, horizon=15)
    kernel = segment_kernel(0, 15, params)
    pure = evolve_pure(InitialState.basis(2), params.with_decoherence(0.0))
    assert np.allclose(kernel.masses[1], np.abs(pure.amplitudes) ** 2, atol=1e-14)


def test_kernel_stochasticity_fuzz(rng):
    for _ in range(100):
        t = int(rng.integers(2, 40))
        params = WalkParams(lam=rng.uniform(0, 2), zeta=rng.uniform(0, 2.5), decoherence=0.5, horizon=t)
        start = int(rng.integers(0, t))
        end = int(rng.integers(start + 1, t + 1))
        kernel = segment_kernel(start, end, params)
        assert np.allclose(kernel.row_sums(), 1.0, atol=1e-10)
        marginal, law = coin_marginal_and_jump_law(kernel)
        assert np.allclose(marginal.row_sums(), 1.0, atol=1e-10)
        sums = law.laws.sum(axis=2)
        positive = marginal.entries > 0
        assert np.allclose(sums[positive], 1.0, atol=1e-10)


def test_segment_kernel_validates_bounds():
    params = WalkParams(lam=0.5, zeta=1.0, decoherence=0.5, horizon=10)
    for start, end in [(3, 3), (5, 2), (-1, 4), (4, 11)]:
        with pytest.raises(ValueError):
            segment_kernel(start, end, params)


def test_jump_law_sampling_stays_on_support(rng):
    params = WalkParams(lam=0.5, zeta=1.0, decoherence=0.5, horizon=12)
    _, law = coin_marginal_and_jump_law(segment_kernel(2, 7, params))
    starts = np.array([0, 0, 1, 1])
    ends = np.array([0, 1, 0, 1])
    draws = law.sample(starts, ends, 2000, rng)
    assert draws.shape == (4, 2000)
    for row, (a, b) in enumerate(zip(starts, ends)):
        support = law.displacements[law.laws[a, b] > 0]
        assert set(np.unique(draws[row])) <= set(support)


def test_schedule_counts_histogram(rng):
    params = WalkParams(lam=0.5, zeta=1.0, decoherence=0.5, horizon=10)
    counts = schedule_counts(1, params, n_I=50, n_Y=20, rng=rng)
    assert counts.shape == (21,)
    assert counts.sum() == 1000
    assert np.all(counts[1::2] == 0)


def test_siy_at_full_decoherence_matches_classical_walk():
    params = WalkParams(lam=0.5, zeta=1.0, decoherence=1.0, horizon=30)
    estimate = siy_estimate(InitialState.basis(1), params, n_sigma=1, n_I=100000, n_Y=1, seed=7)
    classical, _ = evolve_classical((1.0, 0.0), params)
    assert total_variation(estimate, classical) <= 0.02


def test_siy_matches_exact_evolution():
    init = InitialState.basis(1)
    params = WalkParams(lam=0.5, zeta=1.0, decoherence=0.5, horizon=40)
    estimate = siy_estimate(init, params, n_sigma=400, n_I=200, n_Y=50, seed=17)
    exact = evolve_exact(init, kraus_for(params), params)
    assert total_variation(estimate, exact) <= 0.05
    assert estimate.stderr.shape == estimate.masses.shape
    assert np.all(estimate.stderr >= 0)
    assert estimate.metadata['n_sigma'] == 400


def test_siy_is_reproducible_and_worker_independent():
    params = WalkParams(lam=0.5, zeta=1.0, decoherence=0.5, horizon=15)
    init = InitialState.basis(2)
    inline = siy_estimate(init, params, n_sigma=4, n_I=50, n_Y=10, seed=99, workers=1)
    pooled = siy_estimate(init, params, n_sigma=4, n_I=50, n_Y=10, seed=99, workers=2)
    assert np.array_equal(inline.masses, pooled.masses)
    assert np.array_equal(inline.stderr, pooled.stderr)


def test_siy_refuses_invalid_requests():
    params = WalkParams(lam=0.5, zeta=1.0, decoherence=0.0, horizon=10)
    with pytest.raises(ValueError) as excinfo:
        siy_estimate(InitialState.symmetric(), params, n_sigma=0, n_I=10, n_Y=10, seed=1)
    message = str(excinfo.value)
    assert 'p must be > 0' in message
    assert 'basis' in message
    assert 'n_sigma' in message


@pytest.mark.slow
def test_siy_oracle_at_full_sampling_scale():
    init = InitialState.basis(1)
    params = WalkParams(lam=0.5, zeta=1.0, decoherence=0.5, horizon=40)
    estimate = siy_estimate(init, params, n_sigma=500, n_I=2000, n_Y=500, seed=2024, workers=0)
    exact = evolve_exact(init, kraus_for(params), params)
    assert total_variation(estimate, exact) <= 0.015


def test_schedules_merge_in_any_order(rng):
    params = WalkParams(lam=0.5, zeta=1.0, decoherence=0.5, horizon=15)
    per_schedule = [schedule_counts(1, params, 40, 10, substream(21, 'siy', index)) for index in range(12)]
    masses, stderr = merge_schedule_counts(per_schedule, 400)
    for _ in range(5):
        order = rng.permutation(len(per_schedule))
        shuffled_masses, shuffled_stderr = merge_schedule_counts([per_schedule[i] for i in order], 400)
        assert np.array_equal(masses, shuffled_masses)
        assert np.array_equal(stderr, shuffled_stderr)

    estimate = siy_estimate(InitialState.basis(1), params, n_sigma=12, n_I=40, n_Y=10, seed=21, workers=1)
    assert np.array_equal(estimate.masses, masses)
