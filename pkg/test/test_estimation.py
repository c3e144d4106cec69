import itertools

import numpy as np
import pytest

from StarRisNoma.error_handling import InvalidParameterException, UnmatchedLengthObservationsException
from StarRisNoma.estimation import (PilotConfig, combine, distortion_power, estimate_channels,
                                    lmmse_estimate, ls_error_variance, ls_nmse_closed_form,
                                    nmse_closed_form, nmse_floor, pilot_sequences,
                                    simulate_pilot_rx)
from StarRisNoma.experiments import solve_powers
from StarRisNoma.geometry_channel import SIDES, SceneConfig, draw_channels, equivalent_channel
from StarRisNoma.noise_sampling import PhaseNoiseModel, RngStream
from StarRisNoma.statistics import channel_moments
from test.utils import make_small_scene, make_system


def make_pilots(scene, geom, snr_db, K):
    p_t, p_r = solve_powers(snr_db, snr_db, geom, scene)
    return PilotConfig(K=K, p_t=p_t, p_r=p_r)


def hardware(scene, eps):
    return scene.replace(eps_v=eps, eps_ut=eps, eps_ur=eps)


def test_pilot_sequences():
    for K in [2, 3, 50]:
        tau_t, tau_r = pilot_sequences(K)
        assert tau_t.shape == (K,)
        assert np.allclose(np.abs(tau_t), 1)
        assert np.allclose(np.abs(tau_r), 1)
        assert abs(np.sum(tau_t * np.conj(tau_r))) < 1e-12
        assert np.isclose(np.sum(tau_r * np.conj(tau_r)), K)
    for K in [1, 0, 2.5]:
        with pytest.raises(InvalidParameterException):
            pilot_sequences(K)


def test_pilot_config():
    pilots = PilotConfig(K=10, p_t=2.0, p_r=3.0)
    assert pilots.power("t") == 2.0
    assert pilots.power("r") == 3.0
    assert pilots.replace(K=4).K == 4
    assert PilotConfig().K == 50


def test_combine():
    tau_t, tau_r = pilot_sequences(8)
    observations = (2 - 1j) * tau_t + 0.5j * tau_r
    assert np.isclose(combine(observations, tau_t), (2 - 1j) * np.sqrt(8))
    assert np.isclose(combine(observations, tau_r), 0.5j * np.sqrt(8))

    batch = np.stack([observations, 2 * observations])
    assert np.allclose(combine(batch, tau_r), [0.5j * np.sqrt(8), 1j * np.sqrt(8)])

    with pytest.raises(UnmatchedLengthObservationsException):
        combine(observations[:-1], tau_t)
    with pytest.raises(UnmatchedLengthObservationsException):
        combine(observations, np.stack([tau_t, tau_r]))


def test_simulate_pilot_rx_noiseless():
    scene, geom, design = make_system(make_small_scene(2, noise_power=0.0))
    pilots = PilotConfig(K=4, p_t=2.0, p_r=0.5)
    real = draw_channels(scene, geom, RngStream(seed=1))
    observations = simulate_pilot_rx(real, design, geom, scene, pilots, RngStream(seed=2))
    h_t, h_r = (equivalent_channel(real, design, geom, side) for side in SIDES)
    tau_t, tau_r = pilot_sequences(4)
    assert observations.shape == (4,)
    assert np.allclose(observations, np.sqrt(2.0) * h_t * tau_t + np.sqrt(0.5) * h_r * tau_r)


def test_estimation_decomposition():
    # the estimate and the error split the channel variance exactly
    base = make_small_scene(4)
    grid = itertools.product([2, 50], [1.0, 1 - 1e-2], [PhaseNoiseModel(),
                             PhaseNoiseModel(kind="vonmises", power=0.1)],
                             [0.0, 3.0], [-10.0, 20.0], [False, True])
    count = 0
    for K, eps, noise, kappa, snr_db, exact in grid:
        scene, geom, design = make_system(hardware(base, eps).replace(
            phase_noise=noise, kappa_t=kappa, kappa_r=kappa))
        pilots = make_pilots(scene, geom, snr_db, K)
        for side in SIDES:
            _, est_variance, err_variance = lmmse_estimate(
                0.0, design, geom, scene, pilots, side, exact)
            variance = channel_moments(design, geom, scene, side, exact).variance
            assert abs(est_variance + err_variance - variance) <= 1e-12 * variance
        count += 1
    assert count == 64


@pytest.mark.parametrize("estimator", ["lmmse", "ls"])
def test_error_power_monte_carlo(estimator):
    scene, geom, design = make_system(hardware(make_small_scene(
        4, phase_noise=PhaseNoiseModel(kind="uniform", power=0.1)), 1 - 1e-2))
    pilots = make_pilots(scene, geom, 0.0, 10)
    real = draw_channels(scene, geom, RngStream(seed=3), size=10000)
    observations = simulate_pilot_rx(real, design, geom, scene, pilots, RngStream(seed=4))
    outcome = estimate_channels(observations, design, geom, scene, pilots, estimator,
                                exact_diagonal=True)

    for side in SIDES:
        h = equivalent_channel(real, design, geom, side)
        error_power = np.mean(np.abs(h - outcome.estimate(side)) ** 2)
        assert abs(error_power / outcome.err_variance(side) - 1) < 0.05
        if estimator == "ls":
            assert np.isclose(outcome.err_variance(side), ls_error_variance(
                design, geom, scene, pilots, side, exact_diagonal=True))

    if estimator == "lmmse":
        assert np.isclose(outcome.nmse_closed, nmse_closed_form(
            design, geom, scene, pilots, exact_diagonal=True))
    else:
        assert np.isclose(outcome.nmse_closed, ls_nmse_closed_form(
            design, geom, scene, pilots, exact_diagonal=True))


def test_ls_estimate_variance():
    scene, geom, design = make_system(make_small_scene(2))
    pilots = make_pilots(scene, geom, 0.0, 4)
    real = draw_channels(scene, geom, RngStream(seed=5), size=3)
    observations = simulate_pilot_rx(real, design, geom, scene, pilots, RngStream(seed=6))
    outcome = estimate_channels(observations, design, geom, scene, pilots, "ls")
    variance = channel_moments(design, geom, scene, "t").variance
    assert np.isclose(outcome.est_variance_t, variance + outcome.err_variance_t)
    # LS is worse than LMMSE
    assert ls_nmse_closed_form(design, geom, scene, pilots) > \
        nmse_closed_form(design, geom, scene, pilots)

    with pytest.raises(InvalidParameterException):
        estimate_channels(observations, design, geom, scene, pilots, "genie")


def test_lmmse_degenerate():
    scene, geom, design = make_system(make_small_scene(2, noise_power=0.0))
    pilots = PilotConfig(K=2, p_t=0.0, p_r=0.0)
    with pytest.raises(InvalidParameterException):
        lmmse_estimate(0.0, design, geom, scene, pilots, "t")
    with pytest.raises(InvalidParameterException):
        ls_error_variance(design, geom, scene, pilots, "t")


def test_distortion_power():
    scene, geom, design = make_system(make_small_scene(2))
    pilots = PilotConfig(K=2, p_t=1.0, p_r=1.0)
    assert distortion_power(design, geom, scene, pilots) == 0.0

    scene = hardware(scene, 0.9)
    second = sum(channel_moments(design, geom, scene, side).second_moment for side in SIDES)
    assert np.isclose(distortion_power(design, geom, scene, pilots), (1 - 0.81) * second)


def test_nmse_floor():
    scene, geom, design = make_system(hardware(SceneConfig(), 1 - 1e-2))
    pilots = make_pilots(scene, geom, 60.0, 2)
    closed = nmse_closed_form(design, geom, scene, pilots)
    floor = nmse_floor(design, geom, scene, pilots)
    assert floor > 0
    assert abs(closed / floor - 1) < 0.005

    # for long pilots the approximation approaches the exact floor
    long_pilots = pilots.replace(K=10000)
    exact = nmse_floor(design, geom, scene, long_pilots)
    approximate = nmse_floor(design, geom, scene, long_pilots, variant="large_K")
    assert approximate >= exact
    assert abs(approximate / exact - 1) < 1e-2

    ideal = SceneConfig()
    assert nmse_floor(design, geom, ideal, pilots) == 0.0
    with pytest.raises(InvalidParameterException):
        nmse_floor(design, geom, scene, pilots, variant="small_K")


def test_nmse_vanishes_with_ideal_hardware():
    scene, geom, design = make_system(SceneConfig())
    pilots = make_pilots(scene, geom, 40.0, 2)
    assert nmse_closed_form(design, geom, scene, pilots) < 1e-4


def test_nmse_decreases_with_pilot_length():
    for eps in [1.0, 1 - 1e-2, 1 - 1e-1]:
        scene, geom, design = make_system(hardware(SceneConfig(), eps))
        pilots = make_pilots(scene, geom, 0.0, 2)
        values = [nmse_closed_form(design, geom, scene, pilots.replace(K=K))
                  for K in [2, 10, 50, 200, 1000]]
        assert all(a > b for a, b in zip(values[:-1], values[1:]))


def test_nmse_decreases_with_power():
    for eps in [1.0, 1 - 1e-2, 1 - 1e-1]:
        scene, geom, design = make_system(hardware(SceneConfig(), eps))
        for K in [2, 50]:
            values = [nmse_closed_form(design, geom, scene, make_pilots(scene, geom, snr_db, K))
                      for snr_db in [-10.0, 0.0, 10.0, 20.0]]
            assert all(a > b for a, b in zip(values[:-1], values[1:]))
