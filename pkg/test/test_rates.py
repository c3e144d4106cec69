import math

import numpy as np
import pytest

from StarRisNoma.error_handling import InvalidParameterException
from StarRisNoma.estimation import PilotConfig
from StarRisNoma.experiments import solve_powers
from StarRisNoma.geometry_channel import SceneConfig
from StarRisNoma.rates import (RateInputs, RateReport, effective_noise, ergodic_sum_upper_bound,
                               noma_rates_imperfect, noma_rates_perfect, noma_sum_rate,
                               oma_optimal_fraction, oma_rates, optimal_decoding_fraction,
                               rate_report, sum_rate_degradation, time_share)
from test.utils import make_small_scene, make_system, sample_equivalent_channels


def make_random_inputs(count, seed, eps_v=1.0, eps_ut=1.0, eps_ur=1.0, errors=True, **kwargs):
    """A batch of random channel estimates, powers and error variances"""
    rng = np.random.default_rng(seed)
    h_t = rng.normal(size=count) + 1j * rng.normal(size=count)
    h_r = rng.normal(size=count) + 1j * rng.normal(size=count)
    err_t = rng.uniform(0, 0.5, size=count) if errors else 0.0
    err_r = rng.uniform(0, 0.5, size=count) if errors else 0.0
    rho_t = 10 ** rng.uniform(-1, 2, size=count)
    rho_r = 10 ** rng.uniform(-1, 2, size=count)
    return RateInputs(h_t, h_r, err_t, err_r, rho_t, rho_r, eps_v=eps_v, eps_ut=eps_ut,
                      eps_ur=eps_ur, noise_power=1.0, **kwargs)


def test_sic_rates_example():
    # S_t = 3, S_r = 1 and unit effective noise
    inputs = RateInputs(1.0, 1.0, 0.0, 0.0, 3.0, 1.0, noise_power=1.0)
    assert effective_noise(inputs) == 1.0
    rates = noma_rates_perfect(inputs)
    assert np.isclose(rates.R_t_tr, math.log2(5 / 2))
    assert np.isclose(rates.R_r_tr, 1.0)
    assert np.isclose(rates.R_t_rt, 2.0)
    assert np.isclose(rates.R_r_rt, math.log2(5 / 4))
    assert np.isclose(noma_sum_rate(inputs), math.log2(5))

    rate_t, rate_r, total = time_share(rates, 0.25)
    assert np.isclose(rate_t, 0.25 * math.log2(5 / 2) + 0.75 * 2.0)
    assert np.isclose(total, math.log2(5))
    with pytest.raises(InvalidParameterException):
        time_share(rates, 1.5)


def test_imperfect_sic_example():
    inputs = RateInputs(1.0, 1.0, 0.0, 0.0, 3.0, 1.0, noise_power=1.0, eta=0.5)
    rates = noma_rates_imperfect(inputs)
    # the first decoded user is unaffected
    assert np.isclose(rates.R_t_tr, math.log2(5 / 2))
    assert np.isclose(rates.R_r_tr, math.log2(1 + 1 / 2.5))
    assert np.isclose(rates.R_t_rt, math.log2(1 + 3 / 1.5))
    assert np.isclose(rates.R_r_rt, math.log2(5 / 4))

    perfect = RateInputs(1.0, 1.0, 0.0, 0.0, 3.0, 1.0, noise_power=1.0, eta=0.0)
    assert noma_rates_imperfect(perfect) == noma_rates_perfect(perfect)


def test_effective_noise():
    inputs = RateInputs(2.0, 1j, 0.1, 0.2, 3.0, 4.0, eps_v=0.9, eps_ut=0.8, eps_ur=1.0,
                        noise_power=0.5)
    expected = 3.0 * ((1 - 0.72) * 4 + 0.1) + 4.0 * ((1 - 0.9) * 1 + 0.2) + 0.5
    assert np.isclose(effective_noise(inputs), expected)
    assert np.isclose(inputs.signal_power("t"), 3.0 * 0.72 * 4)


def test_sum_rate_independent_of_order():
    inputs = make_random_inputs(1000, seed=0, eps_v=0.99, eps_ut=0.95, eps_ur=0.9)
    rates = noma_rates_perfect(inputs)
    sums = np.array([time_share(rates, beta)[2] for beta in np.linspace(0, 1, 11)])
    assert np.max(sums.max(axis=0) - sums.min(axis=0)) < 1e-12
    assert np.allclose(sums[0], noma_sum_rate(inputs), rtol=0, atol=1e-12)


def test_oma_matches_noma_at_optimal_fraction():
    for eps in [1.0, 1 - 1e-3]:
        inputs = make_random_inputs(1000, seed=1, eps_v=eps, eps_ut=eps, eps_ur=eps,
                                    errors=False)
        noma = noma_sum_rate(inputs)
        best = oma_optimal_fraction(inputs)
        oma = oma_rates(inputs.replace(fraction_b=best))[2]
        assert np.max(np.abs(oma - noma)) < 1e-9

    # with ideal hardware no other split does better
    inputs = make_random_inputs(1000, seed=2, errors=False)
    noma = noma_sum_rate(inputs)
    for fraction in np.linspace(0.001, 0.999, 999):
        oma = oma_rates(inputs.replace(fraction_b=fraction))[2]
        assert np.all(oma <= noma + 1e-9)


def test_oma_optimal_fraction_asymmetric_snr():
    inputs = RateInputs(1.0, 1.0, 0.0, 0.0, 100.0, 0.01)
    assert np.isclose(oma_optimal_fraction(inputs), 10000 / 10001)


def test_oma_rates():
    inputs = RateInputs(1.0, 1.0, 0.0, 0.0, 3.0, 1.0, noise_power=1.0, fraction_b=0.5)
    rate_t, rate_r, total = oma_rates(inputs)
    assert np.isclose(rate_t, 0.5 * math.log2(1 + 3 / 0.5))
    assert np.isclose(rate_r, 0.5 * math.log2(1 + 1 / 0.5))
    assert np.isclose(total, rate_t + rate_r)
    for fraction in [-0.1, 1.2]:
        with pytest.raises(InvalidParameterException):
            oma_rates(inputs.replace(fraction_b=fraction))

    # all resources to one user
    rate_t, rate_r, total = oma_rates(inputs.replace(fraction_b=1.0))
    assert np.isclose(rate_t, math.log2(1 + 3)) and rate_r == 0.0
    rate_t, rate_r, total = oma_rates(inputs.replace(fraction_b=0.0))
    assert rate_t == 0.0 and np.isclose(total, math.log2(1 + 1))
    batch = make_random_inputs(50, seed=6, eps_ut=0.9, fraction_b=0.0)
    rate_t, rate_r, _ = oma_rates(batch)
    assert np.all(rate_t == 0.0) and np.all(np.isfinite(rate_r)) and np.all(rate_r > 0)


def test_optimal_decoding_fraction():
    for eta in [0.1, 0.3, 1.0]:
        inputs = make_random_inputs(1000, seed=3, eps_ut=0.95, eps_ur=0.9, eta=eta)
        beta = optimal_decoding_fraction(inputs)
        assert set(np.unique(beta)) <= {0.0, 1.0}
        chosen = rate_report(inputs.replace(beta=beta), imperfect=True).R_sum_noma
        grid = np.array([rate_report(inputs.replace(beta=b), imperfect=True).R_sum_noma
                         for b in np.linspace(0, 1, 11)])
        assert np.all(chosen >= grid.max(axis=0) - 1e-12)

    # a single realization gives a plain float; ties decode UE-R first
    assert optimal_decoding_fraction(RateInputs(1.0, 2.0, 0, 0, 1.0, 1.0)) == 1.0
    assert optimal_decoding_fraction(RateInputs(1.0, 1.0, 0, 0, 1.0, 1.0)) == 0.0


def test_sum_rate_degradation():
    for beta in [0.0, 0.3, 1.0]:
        inputs = make_random_inputs(100, seed=4, eta=0.2, beta=beta)
        perfect = rate_report(inputs).R_sum_noma
        imperfect = rate_report(inputs, imperfect=True).R_sum_noma
        assert np.allclose(perfect - imperfect, sum_rate_degradation(inputs), atol=1e-12)
        assert np.all(sum_rate_degradation(inputs) >= -1e-15)


def test_imperfect_sum_rate_falls_with_residual():
    for beta in [0.0, 0.5, 1.0]:
        values = [rate_report(make_random_inputs(500, seed=5, eps_ut=0.95, eta=eta, beta=beta),
                              imperfect=True).R_sum_noma
                  for eta in [0.0, 0.25, 0.5, 1.0]]
        assert np.allclose(values[0], rate_report(
            make_random_inputs(500, seed=5, eps_ut=0.95, beta=beta)).R_sum_noma)
        for larger, smaller in zip(values[:-1], values[1:]):
            assert np.all(smaller <= larger + 1e-12)


def test_rate_inputs_validation():
    with pytest.raises(InvalidParameterException):
        RateInputs(1.0, 1.0, -0.1, 0.0, 1.0, 1.0)
    with pytest.raises(InvalidParameterException):
        RateInputs(1.0, 1.0, 0.0, 0.0, -1.0, 1.0)
    with pytest.raises(InvalidParameterException):
        RateInputs(1.0, 1.0, 0.0, 0.0, 1.0, 1.0, eps_v=1.1)
    with pytest.raises(InvalidParameterException):
        RateInputs(1.0, 1.0, 0.0, 0.0, 1.0, 1.0, eta=2.0)

    scene = SceneConfig(eps_v=0.9, noise_power=2.0)
    inputs = RateInputs.from_scene(scene, 1.0, 1.0, 0.0, 0.0, 1.0, 1.0, beta=0.2)
    assert inputs.eps_v == 0.9
    assert inputs.noise_power == 2.0
    assert inputs.beta == 0.2


def test_rate_report():
    inputs = RateInputs(1.0, 1.0, 0.0, 0.0, 3.0, 1.0, noise_power=1.0, beta=1.0)
    report = rate_report(inputs, upper_bound=7.0)
    assert isinstance(report, RateReport)
    assert np.isclose(report.R_t_noma, math.log2(5 / 2))
    assert np.isclose(report.R_r_noma, 1.0)
    assert np.isclose(report.R_sum_noma, math.log2(5))
    assert np.isclose(report.R_sum_oma, report.R_t_oma + report.R_r_oma)
    assert report.upper_bound == 7.0
    assert rate_report(inputs).upper_bound is None


def test_ergodic_sum_upper_bound():
    scene, geom, design = make_system(make_small_scene(4))
    powers = solve_powers(0.0, 0.0, geom, scene)
    h_t, h_r = sample_equivalent_channels(scene, geom, design, 20000, seed=9)

    # with perfect channel knowledge the bound holds by concavity of the logarithm
    genie = RateInputs.from_scene(scene, h_t, h_r, 0.0, 0.0, *powers)
    bound = ergodic_sum_upper_bound(design, geom, scene, None, powers)
    assert np.mean(noma_sum_rate(genie)) <= bound

    # long pilots approach perfect channel knowledge
    pilots = PilotConfig(K=10 ** 7, p_t=powers[0], p_r=powers[1])
    assert np.isclose(ergodic_sum_upper_bound(design, geom, scene, pilots, powers), bound,
                      rtol=1e-5)
    short = pilots.replace(K=2)
    assert ergodic_sum_upper_bound(design, geom, scene, short, powers) < bound

    silent = ergodic_sum_upper_bound(design, geom, scene, None, (0.0, 0.0))
    assert silent == 0.0
