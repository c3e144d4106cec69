"""Achievable rates of the two-user uplink. The AP decodes both users from the
same observation with successive interference cancellation (SIC), in the order
UE-T then UE-R (``t->r``) or the reverse (``r->t``). A time-sharing factor
``beta`` mixes the two orders. Since only the estimates ``h_hat`` are available,
the estimation error and the hardware distortion of both users add to the
thermal noise, giving the effective noise

``E = rho_t e_t + rho_r e_r + sigma_w^2``, with
``e_i = (1 - eps_v eps_ui) |h_hat_i|^2 + C_err_i``.

With perfect SIC the sum-rate ``log2(1 + (S_t + S_r) / E)`` with
``S_i = rho_i eps_v eps_ui |h_hat_i|^2`` does not depend on ``beta``. With
imperfect SIC a fraction ``eta`` of the first-decoded user's power remains as
interference for the second user, and the optimal ``beta`` is an endpoint: the
user with the weaker effective channel is decoded first.

The OMA baseline gives UE-T a fraction ``B`` of the time/frequency resources
and UE-R the rest, with the noise scaled by the occupied fraction.

All functions accept numpy arrays for the channel estimates, so a whole batch
of realizations is handled in a single call.
"""

from collections import namedtuple
import math

import numpy as np

from .error_handling import InvalidParameterException
from .estimation import lmmse_estimate
from .geometry_channel import SIDES
from .statistics import channel_moments

__all__ = ["RateInputs", "RateReport", "SicOrderRates", "effective_noise",
           "noma_rates_perfect", "noma_rates_imperfect", "time_share",
           "noma_sum_rate", "ergodic_sum_upper_bound", "oma_rates",
           "oma_optimal_fraction", "sum_rate_degradation",
           "optimal_decoding_fraction", "rate_report"]


SicOrderRates = namedtuple(
    "SicOrderRates", ["R_t_tr", "R_r_tr", "R_t_rt", "R_r_rt"])


RateReport = namedtuple(
    "RateReport", ["R_t_tr", "R_r_tr", "R_t_rt", "R_r_rt",
                   "R_t_noma", "R_r_noma", "R_sum_noma",
                   "R_t_oma", "R_r_oma", "R_sum_oma", "upper_bound"])
RateReport.__new__.__defaults__ = (None,)


def _in_range(name, value, low, high):
    value = np.asarray(value, dtype=float)
    if not np.all((value >= low) & (value <= high)):
        raise InvalidParameterException(
            value, "%s must lie in [%g, %g]" % (name, low, high))
    return value


class RateInputs(object):
    """Everything needed to evaluate the instantaneous rates of one (or a batch
    of) channel estimate(s)"""

    def __init__(self, h_hat_t, h_hat_r, err_variance_t, err_variance_r,
                 rho_t, rho_r, eps_v=1.0, eps_ut=1.0, eps_ur=1.0,
                 noise_power=1.0, eta=0.0, beta=0.5, fraction_b=0.5):
        """
        :param h_hat_t: estimate(s) of the UE-T equivalent channel
        :param h_hat_r: estimate(s) of the UE-R equivalent channel
        :param err_variance_t: estimation error power of UE-T
        :param err_variance_r: estimation error power of UE-R
        :param rho_t: UE-T transmit power (watts)
        :param rho_r: UE-R transmit power (watts)
        :param eps_v: AP hardware quality
        :param eps_ut: UE-T hardware quality
        :param eps_ur: UE-R hardware quality
        :param noise_power: thermal noise power (watts)
        :param eta: residual fraction of imperfect SIC
        :param beta: time-sharing fraction of the ``t->r`` decoding order
        :param fraction_b: OMA resource fraction of UE-T
        """
        self.h_hat_t = np.asarray(h_hat_t)
        self.h_hat_r = np.asarray(h_hat_r)
        self.err_variance_t = _in_range("Error variance", err_variance_t, 0, np.inf)
        self.err_variance_r = _in_range("Error variance", err_variance_r, 0, np.inf)
        self.rho_t = _in_range("Transmit power", rho_t, 0, np.inf)
        self.rho_r = _in_range("Transmit power", rho_r, 0, np.inf)
        self.eps_v = _in_range("Hardware quality", eps_v, 0, 1)
        self.eps_ut = _in_range("Hardware quality", eps_ut, 0, 1)
        self.eps_ur = _in_range("Hardware quality", eps_ur, 0, 1)
        self.noise_power = _in_range("Noise power", noise_power, 0, np.inf)
        self.eta = _in_range("SIC imperfection", eta, 0, 1)
        self.beta = _in_range("Decoding order fraction", beta, 0, 1)
        self.fraction_b = np.asarray(fraction_b, dtype=float)

    @classmethod
    def from_scene(cls, scene, h_hat_t, h_hat_r, err_variance_t, err_variance_r,
                   rho_t, rho_r, **kwargs):
        """Takes the hardware qualities and noise power from a
        :class:`StarRisNoma.geometry_channel.SceneConfig`"""
        return cls(h_hat_t, h_hat_r, err_variance_t, err_variance_r, rho_t,
                   rho_r, eps_v=scene.eps_v, eps_ut=scene.eps_ut,
                   eps_ur=scene.eps_ur, noise_power=scene.noise_power, **kwargs)

    def replace(self, **changes):
        values = dict(h_hat_t=self.h_hat_t, h_hat_r=self.h_hat_r,
                      err_variance_t=self.err_variance_t,
                      err_variance_r=self.err_variance_r, rho_t=self.rho_t,
                      rho_r=self.rho_r, eps_v=self.eps_v, eps_ut=self.eps_ut,
                      eps_ur=self.eps_ur, noise_power=self.noise_power,
                      eta=self.eta, beta=self.beta, fraction_b=self.fraction_b)
        values.update(changes)
        return RateInputs(**values)

    def signal_power(self, side):
        """Useful received power ``rho_i eps_v eps_ui |h_hat_i|^2``"""
        if side == "t":
            return self.rho_t * self.eps_v * self.eps_ut * np.abs(self.h_hat_t) ** 2
        return self.rho_r * self.eps_v * self.eps_ur * np.abs(self.h_hat_r) ** 2

    def distortion(self, side):
        """Per-unit-power distortion ``(1 - eps_v eps_ui) |h_hat_i|^2 + C_err_i``"""
        if side == "t":
            return (1 - self.eps_v * self.eps_ut) * np.abs(self.h_hat_t) ** 2 + \
                self.err_variance_t
        return (1 - self.eps_v * self.eps_ur) * np.abs(self.h_hat_r) ** 2 + \
            self.err_variance_r


def effective_noise(inputs):
    """Effective noise ``rho_t e_t + rho_r e_r + sigma_w^2`` seen by both users

    :param inputs: a :class:`RateInputs`
    :returns: the effective noise power
    """
    return (inputs.rho_t * inputs.distortion("t") +
            inputs.rho_r * inputs.distortion("r") + inputs.noise_power)


def _log_rate(signal, interference):
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(signal > 0, signal / interference, 0.0)
    return np.log2(1 + ratio)


def _sic_rates(inputs, residual):
    noise = effective_noise(inputs)
    s_t = inputs.signal_power("t")
    s_r = inputs.signal_power("r")
    return SicOrderRates(
        R_t_tr=_log_rate(s_t, s_r + noise),
        R_r_tr=_log_rate(s_r, residual * s_t + noise),
        R_t_rt=_log_rate(s_t, residual * s_r + noise),
        R_r_rt=_log_rate(s_r, s_t + noise))


def noma_rates_perfect(inputs):
    """Per-user rates of both SIC orders when the first-decoded signal is
    removed completely

    :param inputs: a :class:`RateInputs`
    :returns: a :class:`SicOrderRates`
    """
    return _sic_rates(inputs, 0.0)


def noma_rates_imperfect(inputs):
    """Per-user rates of both SIC orders when a fraction ``inputs.eta`` of the
    first-decoded signal remains after cancellation

    :param inputs: a :class:`RateInputs`
    :returns: a :class:`SicOrderRates`
    """
    return _sic_rates(inputs, inputs.eta)


def time_share(rates, beta):
    """Mixes the two decoding orders, using ``t->r`` a fraction ``beta`` of the
    time

    :param rates: a :class:`SicOrderRates`
    :param beta: time-sharing fraction in ``[0, 1]``
    :returns: ``(R_t, R_r, R_sum)``
    """
    beta = _in_range("Decoding order fraction", beta, 0, 1)
    rate_t = beta * rates.R_t_tr + (1 - beta) * rates.R_t_rt
    rate_r = beta * rates.R_r_tr + (1 - beta) * rates.R_r_rt
    return rate_t, rate_r, rate_t + rate_r


def noma_sum_rate(inputs):
    """Perfect-SIC sum-rate ``log2(1 + (S_t + S_r) / E)``, which holds for
    every decoding order"""
    return _log_rate(inputs.signal_power("t") + inputs.signal_power("r"),
                     effective_noise(inputs))


def ergodic_sum_upper_bound(design, geom, scene, pilots, powers, exact_diagonal=False):
    """Upper bound on the ergodic NOMA sum-rate obtained by moving the
    expectation inside the logarithm, with the LMMSE estimate statistics

    :param design: a :class:`StarRisNoma.beamforming.PhaseDesign`
    :param geom: a :class:`StarRisNoma.geometry_channel.LinkGeometry`
    :param scene: a :class:`StarRisNoma.geometry_channel.SceneConfig`
    :param pilots: a :class:`StarRisNoma.estimation.PilotConfig`, or None for
        perfect channel knowledge (the limit of an infinitely long pilot)
    :param powers: ``(rho_t, rho_r)`` data transmit powers
    :returns: the bound in bit/s/Hz
    """
    signal = 0.0
    distortion = scene.noise_power
    for side, power in zip(SIDES, powers):
        moments = channel_moments(design, geom, scene, side, exact_diagonal)
        if pilots is None:
            est_variance, err_variance = moments.variance, 0.0
        else:
            _, est_variance, err_variance = lmmse_estimate(
                0.0, design, geom, scene, pilots, side, exact_diagonal)
        estimate_power = moments.mean_power + est_variance
        quality = scene.eps_v * scene.eps_u(side)
        signal += power * quality * estimate_power
        distortion += power * ((1 - quality) * estimate_power + err_variance)
    if signal == 0:
        return 0.0
    return math.log2(1 + signal / distortion)


def _oma_share(fraction, signal, distortion, noise_power):
    with np.errstate(divide="ignore", invalid="ignore"):
        rate = fraction * _log_rate(signal, distortion + fraction * noise_power)
    # an empty share carries no rate
    return np.where(fraction > 0, rate, 0.0)[()]


def oma_rates(inputs):
    """Rates when UE-T occupies a fraction ``B = inputs.fraction_b`` of the
    resources and UE-R the remainder. At ``B = 0`` or ``B = 1`` one user holds
    everything and the other gets no rate

    :param inputs: a :class:`RateInputs`
    :returns: ``(R_t, R_r, R_sum)``
    """
    fraction = _in_range("OMA fraction", inputs.fraction_b, 0, 1)
    rate_t = _oma_share(fraction, inputs.signal_power("t"),
                        inputs.rho_t * inputs.distortion("t"), inputs.noise_power)
    rate_r = _oma_share(1 - fraction, inputs.signal_power("r"),
                        inputs.rho_r * inputs.distortion("r"), inputs.noise_power)
    return rate_t, rate_r, rate_t + rate_r


def oma_optimal_fraction(inputs):
    """OMA fraction ``rho_t |h_t|^2 / (rho_t |h_t|^2 + rho_r |h_r|^2)``, which
    maximizes the OMA sum-rate (and makes it match NOMA) when the estimates are
    exact and both users have equal hardware quality"""
    gain_t = inputs.rho_t * np.abs(inputs.h_hat_t) ** 2
    gain_r = inputs.rho_r * np.abs(inputs.h_hat_r) ** 2
    return gain_t / (gain_t + gain_r)


def sum_rate_degradation(inputs):
    """Sum-rate lost to imperfect SIC at the time-sharing fraction
    ``inputs.beta``, relative to the perfect-SIC sum-rate"""
    noise = effective_noise(inputs)
    s_t = inputs.signal_power("t")
    s_r = inputs.signal_power("r")
    eta = inputs.eta
    loss_tr = _log_rate(eta * s_t, noise) - _log_rate(eta * s_t, s_r + noise)
    loss_rt = _log_rate(eta * s_r, noise) - _log_rate(eta * s_r, s_t + noise)
    return inputs.beta * loss_tr + (1 - inputs.beta) * loss_rt


def optimal_decoding_fraction(inputs):
    """Time-sharing fraction minimizing the imperfect-SIC loss: 0 (decode
    UE-R first) when ``rho_t eps_ut |h_t|^2 >= rho_r eps_ur |h_r|^2`` and 1
    otherwise

    :returns: 0.0 or 1.0 (an array for batched inputs)
    """
    strength_t = inputs.rho_t * inputs.eps_ut * np.abs(inputs.h_hat_t) ** 2
    strength_r = inputs.rho_r * inputs.eps_ur * np.abs(inputs.h_hat_r) ** 2
    beta = np.where(strength_t < strength_r, 1.0, 0.0)
    return float(beta) if beta.ndim == 0 else beta


def rate_report(inputs, imperfect=False, upper_bound=None):
    """Collects the NOMA rates of both orders, their time-shared mix and the
    OMA baseline

    :param inputs: a :class:`RateInputs`
    :param imperfect: whether the SIC leaves a residual of ``inputs.eta``
    :param upper_bound: optional ergodic upper bound to carry along
    :returns: a :class:`RateReport`
    """
    orders = noma_rates_imperfect(inputs) if imperfect else noma_rates_perfect(inputs)
    rate_t, rate_r, rate_sum = time_share(orders, inputs.beta)
    oma_t, oma_r, oma_sum = oma_rates(inputs)
    return RateReport(orders.R_t_tr, orders.R_r_tr, orders.R_t_rt, orders.R_r_rt,
                      rate_t, rate_r, rate_sum, oma_t, oma_r, oma_sum, upper_bound)
