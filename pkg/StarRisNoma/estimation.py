"""Channel estimation for the two-timescale protocol. The phase design is fixed
from statistical CSI, after which both users send orthogonal pilot sequences of
length ``K`` through the STAR-RIS. The AP receives, for every pilot symbol ``k``,

``x^(k) = sum_i [ sqrt(P_i eps_v eps_ui) h_i tau_i^(k)
                 + sqrt(P_i (1 - eps_v)) h_i v_i^(k)
                 + sqrt(P_i eps_v (1 - eps_ui)) h_i u_i^(k) ] + w^(k)``

where ``v`` models the AP-side and ``u`` the user-side hardware distortion and
``w ~ CN(0, sigma_w^2)`` the thermal noise. Correlating with the conjugate pilot
of user ``i`` and scaling by ``1/sqrt(K)`` isolates the desired term, after
which the LMMSE (or LS) estimator recovers the equivalent channel ``h_i``.

The statistical quantities the estimator needs (channel means and variances and
the distortion power ``zeta``) are assumed known, and come from
:mod:`StarRisNoma.statistics`.
"""

import math

import numpy as np
from pydantic import BaseModel, Field

from .data_verification import verify_observations
from .error_handling import InvalidParameterException
from .geometry_channel import SIDES, equivalent_channel
from .noise_sampling import as_generator, sample_cscg
from .statistics import channel_moments

__all__ = ["PilotConfig", "EstimationOutcome", "pilot_sequences",
           "simulate_pilot_rx", "combine", "distortion_power",
           "lmmse_estimate", "ls_estimate", "ls_error_variance",
           "estimate_channels", "nmse_closed_form", "ls_nmse_closed_form",
           "nmse_floor", "ESTIMATORS", "FLOOR_VARIANTS"]

ESTIMATORS = ("lmmse", "ls", "genie")
FLOOR_VARIANTS = ("exact", "large_K")


class PilotConfig(BaseModel):
    """Pilot length and per-user pilot powers (watts)"""

    K: int = Field(default=50, ge=2)
    p_t: float = Field(default=1.0, ge=0.0)
    p_r: float = Field(default=1.0, ge=0.0)

    model_config = {"frozen": True}

    def power(self, side):
        return self.p_t if side == "t" else self.p_r

    def replace(self, **changes):
        values = self.model_dump()
        values.update(changes)
        return PilotConfig(**values)


class EstimationOutcome(object):
    """Estimates of both equivalent channels with their closed-form estimate
    and error variances"""

    def __init__(self, h_hat_t, h_hat_r, est_variance_t, est_variance_r,
                 err_variance_t, err_variance_r, nmse_closed):
        self.h_hat_t = h_hat_t
        self.h_hat_r = h_hat_r
        self.est_variance_t = est_variance_t
        self.est_variance_r = est_variance_r
        self.err_variance_t = err_variance_t
        self.err_variance_r = err_variance_r
        self.nmse_closed = nmse_closed

    def estimate(self, side):
        return self.h_hat_t if side == "t" else self.h_hat_r

    def err_variance(self, side):
        return self.err_variance_t if side == "t" else self.err_variance_r


def pilot_sequences(K):
    """Orthogonal unit-modulus pilots: the first two rows of the K-point DFT
    matrix

    :param K: pilot length, at least 2
    :returns: ``(tau_t, tau_r)`` complex vectors of length K
    """
    if int(K) != K or K < 2:
        raise InvalidParameterException(
            K, "Pilot length must be an integer of at least 2, got %r" % (K,))
    k = np.arange(int(K))
    tau_t = np.ones(int(K), dtype=complex)
    tau_r = np.exp(-2j * np.pi * k / K)
    return tau_t, tau_r


def _gain(scene, pilots, side):
    """Per-pilot amplitude of the desired term, ``sqrt(P_i eps_v eps_ui)``"""
    return math.sqrt(pilots.power(side) * scene.eps_v * scene.eps_u(side))


def simulate_pilot_rx(real, design, geom, scene, pilots, rng, equivalent=None):
    """Simulates the K pilot observations received at the AP

    :param real: a :class:`StarRisNoma.geometry_channel.ChannelRealization`
    :param design: a :class:`StarRisNoma.beamforming.PhaseDesign`
    :param geom: a :class:`StarRisNoma.geometry_channel.LinkGeometry`
    :param scene: a :class:`StarRisNoma.geometry_channel.SceneConfig`
    :param pilots: a :class:`PilotConfig`
    :param rng: an :class:`StarRisNoma.noise_sampling.RngStream` or
        ``numpy.random.Generator``
    :param equivalent: optional ``(h_t, h_r)`` already computed from ``real``
    :returns: complex array whose last axis holds the K observations
    """
    rng = as_generator(rng)
    if equivalent is None:
        equivalent = tuple(equivalent_channel(real, design, geom, side)
                           for side in SIDES)
    taus = pilot_sequences(pilots.K)
    shape = real.batch_shape + (pilots.K,)

    observations = np.zeros(shape, dtype=complex)
    for h, tau, side in zip(equivalent, taus, SIDES):
        h = np.asarray(h)[..., np.newaxis]
        observations += _gain(scene, pilots, side) * h * tau
    # the distortion draws are fresh for every pilot symbol
    for side, h in zip(SIDES, equivalent):
        h = np.asarray(h)[..., np.newaxis]
        power = pilots.power(side)
        ap_scale = math.sqrt(power * (1 - scene.eps_v))
        ue_scale = math.sqrt(power * scene.eps_v * (1 - scene.eps_u(side)))
        observations += ap_scale * h * sample_cscg(0, 1.0, shape, rng)
        observations += ue_scale * h * sample_cscg(0, 1.0, shape, rng)
    observations += sample_cscg(0, scene.noise_power, shape, rng)
    return observations


def combine(observations, pilot):
    """Correlates the observations with the conjugate of a pilot sequence,
    ``(1/sqrt(K)) sum_k x^(k) conj(tau^(k))``

    :param observations: complex array whose last axis is the pilot axis
    :param pilot: complex pilot sequence of length K
    :returns: the combined observation (one value per leading index)
    """
    observations = np.asarray(observations)
    pilot = np.asarray(pilot)
    verify_observations(observations, pilot)
    return np.sum(observations * np.conj(pilot), axis=-1) / math.sqrt(pilot.shape[-1])


def distortion_power(design, geom, scene, pilots, exact_diagonal=False):
    """Power ``zeta`` of the hardware-distortion terms remaining after
    combining, ``sum_i P_i (1 - eps_v eps_ui) E[|h_i|^2]``. Both users'
    distortions fall on both combined observations"""
    return sum(pilots.power(side) * (1 - scene.eps_v * scene.eps_u(side)) *
               channel_moments(design, geom, scene, side,
                               exact_diagonal).second_moment
               for side in SIDES)


def _linear_model(design, geom, scene, pilots, side, exact_diagonal):
    """Moments of the combined observation of ``side``: gain, channel
    moments and ``C_xx``"""
    moments = channel_moments(design, geom, scene, side, exact_diagonal)
    gain = math.sqrt(pilots.K) * _gain(scene, pilots, side)
    zeta = distortion_power(design, geom, scene, pilots, exact_diagonal)
    c_xx = gain ** 2 * moments.variance + zeta + scene.noise_power
    return gain, moments, zeta, c_xx


def lmmse_estimate(combined, design, geom, scene, pilots, side, exact_diagonal=False):
    """LMMSE estimate of the equivalent channel of one side

    :param combined: combined observation(s) of ``side``
    :param design: a :class:`StarRisNoma.beamforming.PhaseDesign`
    :param geom: a :class:`StarRisNoma.geometry_channel.LinkGeometry`
    :param scene: a :class:`StarRisNoma.geometry_channel.SceneConfig`
    :param pilots: a :class:`PilotConfig`
    :param side: ``"t"`` or ``"r"``
    :param exact_diagonal: use the exact channel moments instead of the
        closed form. Defaults to False
    :returns: ``(h_hat, est_variance, err_variance)``
    """
    gain, moments, zeta, c_xx = _linear_model(
        design, geom, scene, pilots, side, exact_diagonal)
    if not c_xx > 0:
        raise InvalidParameterException(
            c_xx, "Observation variance must be positive, got %r" % c_xx)

    c_hx = gain * moments.variance
    h_hat = moments.mean + c_hx / c_xx * \
        (np.asarray(combined) - gain * moments.mean)
    est_variance = gain ** 2 * moments.variance ** 2 / c_xx
    err_variance = moments.variance * (zeta + scene.noise_power) / c_xx
    return h_hat, est_variance, err_variance


def ls_estimate(combined, pilots, scene, side):
    """Least-squares estimate, the combined observation divided by the
    desired-term gain ``sqrt(K P_i eps_v eps_ui)``"""
    gain = math.sqrt(pilots.K) * _gain(scene, pilots, side)
    if gain == 0:
        raise InvalidParameterException(
            gain, "LS estimation needs a non-zero pilot power and hardware quality")
    return np.asarray(combined) / gain


def ls_error_variance(design, geom, scene, pilots, side, exact_diagonal=False):
    """Closed-form error power of the LS estimate,
    ``(zeta + sigma_w^2) / (K P_i eps_v eps_ui)``"""
    gain, _, zeta, _ = _linear_model(
        design, geom, scene, pilots, side, exact_diagonal)
    if gain == 0:
        raise InvalidParameterException(
            gain, "LS estimation needs a non-zero pilot power and hardware quality")
    return (zeta + scene.noise_power) / gain ** 2


def nmse_closed_form(design, geom, scene, pilots, exact_diagonal=False):
    """Normalized mean square error of the LMMSE estimates averaged over both
    users, ``(C_err_t / C_hh_t + C_err_r / C_hh_r) / 2``"""
    total = 0.0
    for side in SIDES:
        _, _, err_variance = lmmse_estimate(
            0.0, design, geom, scene, pilots, side, exact_diagonal)
        total += err_variance / channel_moments(
            design, geom, scene, side, exact_diagonal).variance
    return 0.5 * total


def ls_nmse_closed_form(design, geom, scene, pilots, exact_diagonal=False):
    """Normalized mean square error of the LS estimates averaged over both
    users"""
    return 0.5 * sum(
        ls_error_variance(design, geom, scene, pilots, side, exact_diagonal) /
        channel_moments(design, geom, scene, side, exact_diagonal).variance
        for side in SIDES)


def nmse_floor(design, geom, scene, pilots, variant="exact", exact_diagonal=False):
    """High-power limit of the LMMSE N-MSE when both users transmit with equal
    pilot power. Imperfect hardware leaves a floor, since the distortion grows
    with the transmit power

    :param variant: ``"exact"`` for the limit itself, or ``"large_K"`` for its
        approximation when the pilot sequence is long
    :returns: the floor value (0 with ideal hardware)
    """
    if variant not in FLOOR_VARIANTS:
        raise InvalidParameterException(
            variant, "Floor variant must be one of %s" % ", ".join(FLOOR_VARIANTS))
    # zeta with unit pilot power
    zeta = sum((1 - scene.eps_v * scene.eps_u(side)) *
               channel_moments(design, geom, scene, side,
                               exact_diagonal).second_moment
               for side in SIDES)
    total = 0.0
    for side in SIDES:
        variance = channel_moments(
            design, geom, scene, side, exact_diagonal).variance
        signal = pilots.K * scene.eps_v * scene.eps_u(side) * variance
        if zeta == 0:
            continue
        total += zeta / (signal + zeta) if variant == "exact" else zeta / signal
    return 0.5 * total


def estimate_channels(observations, design, geom, scene, pilots, estimator="lmmse",
                      exact_diagonal=False):
    """Combines pilot observations and estimates both equivalent channels

    :param observations: output of :func:`simulate_pilot_rx`
    :param estimator: ``"lmmse"`` or ``"ls"``
    :returns: an :class:`EstimationOutcome`
    """
    taus = pilot_sequences(pilots.K)
    estimates = dict()
    for side, tau in zip(SIDES, taus):
        combined = combine(observations, tau)
        variance = channel_moments(
            design, geom, scene, side, exact_diagonal).variance
        if estimator == "lmmse":
            estimates[side] = lmmse_estimate(
                combined, design, geom, scene, pilots, side, exact_diagonal)
        elif estimator == "ls":
            err_variance = ls_error_variance(
                design, geom, scene, pilots, side, exact_diagonal)
            # the LS estimate is unbiased, so its variance exceeds C_hh by the error
            estimates[side] = (ls_estimate(combined, pilots, scene, side),
                               variance + err_variance, err_variance)
        else:
            raise InvalidParameterException(
                estimator, "Pilot-based estimator must be 'lmmse' or 'ls'")

    if estimator == "lmmse":
        nmse = nmse_closed_form(design, geom, scene, pilots, exact_diagonal)
    else:
        nmse = ls_nmse_closed_form(design, geom, scene, pilots, exact_diagonal)
    (h_t, est_t, err_t), (h_r, est_r, err_r) = estimates["t"], estimates["r"]
    return EstimationOutcome(h_t, h_r, est_t, est_r, err_t, err_r, nmse)
