"""Closed-form first and second moments of the equivalent channels.

With Rician user and AP links and i.i.d. phase noise on the RIS elements, the
equivalent channel of side ``i`` has

- mean ``sqrt(rho_i rho_a kappa_i kappa_a / ((1+kappa_i)(1+kappa_a))) * xi * S_i``
- second moment ``rho_i rho_a / ((1+kappa_i)(1+kappa_a)) *
  (kappa_i kappa_a xi^2 |S_i|^2 + (kappa_i + kappa_a + 1) N_i)``
- variance ``rho_i rho_a (kappa_i + kappa_a + 1) N_i / ((1+kappa_i)(1+kappa_a))``

where ``S_i = sum_n conj(a_bar_n) g_bar_n exp(j theta_bar_n)`` is the coherent
sum of the LoS cascade and ``xi`` the mean of the phase-noise exponential.

The second moment above applies ``xi^2`` to every element pair, including the
diagonal ones whose phase errors cancel. The exact moment therefore carries an
extra ``kappa_i kappa_a (1 - xi^2) N_i`` term (scaled like the variance). Both
are available: ``exact_diagonal=False`` evaluates the expression above and
``exact_diagonal=True`` the exact moments. They coincide whenever ``xi = 1`` or
``kappa_i kappa_a = 0``.
"""

import numpy as np

from .geometry_channel import los_vector
from .noise_sampling import xi_factor

__all__ = ["ChannelMoments", "coherent_sum", "channel_moments",
           "moment_discrepancy"]


class ChannelMoments(object):
    """Mean, second moment and variance of an equivalent channel"""

    def __init__(self, mean, second_moment, variance):
        self.mean = complex(mean)
        self.second_moment = float(second_moment)
        self.variance = float(variance)

    @property
    def mean_power(self):
        """``|E[h]|^2``"""
        return abs(self.mean) ** 2

    def __repr__(self):
        return "ChannelMoments(mean=%r, second_moment=%r, variance=%r)" % (
            self.mean, self.second_moment, self.variance)


def coherent_sum(design, geom, scene, side):
    """Sum of the phase-shifted LoS cascade of a panel,
    ``sum_n conj(a_bar_n) g_bar_n exp(j theta_bar_n)``

    :param design: a :class:`StarRisNoma.beamforming.PhaseDesign`
    :param geom: a :class:`StarRisNoma.geometry_channel.LinkGeometry`
    :param scene: a :class:`StarRisNoma.geometry_channel.SceneConfig`
    :param side: ``"t"`` or ``"r"``
    :returns: a complex number
    """
    g_bar = los_vector(side, geom.aoa(side), geom, scene)
    a_bar = los_vector(side, geom.aod(side), geom, scene)
    return complex(np.sum(np.conj(a_bar) * g_bar * np.exp(1j * design.phases(side))))


def _scaling(geom, scene, side):
    kappa_i = scene.kappa(side)
    kappa_a = scene.kappa_a
    return geom.path_loss(side) * geom.rho_a / ((1 + kappa_i) * (1 + kappa_a))


def moment_discrepancy(design, geom, scene, side):
    """Amount by which the exact second moment exceeds the closed form that
    applies ``xi^2`` to the diagonal element pairs

    :returns: a non-negative float
    """
    xi = xi_factor(scene.phase_noise)
    return (_scaling(geom, scene, side) * scene.kappa(side) * scene.kappa_a *
            (1 - xi ** 2) * scene.num_elements(side))


def channel_moments(design, geom, scene, side, exact_diagonal=False):
    """Closed-form moments of the equivalent channel of one side

    :param design: a :class:`StarRisNoma.beamforming.PhaseDesign`
    :param geom: a :class:`StarRisNoma.geometry_channel.LinkGeometry`
    :param scene: a :class:`StarRisNoma.geometry_channel.SceneConfig`
    :param side: ``"t"`` or ``"r"``
    :param exact_diagonal: whether to include the diagonal phase-noise term
        which makes the moments exact. Defaults to the closed form
    :returns: a :class:`ChannelMoments`
    """
    kappa_i = scene.kappa(side)
    kappa_a = scene.kappa_a
    num_elements = scene.num_elements(side)
    xi = xi_factor(scene.phase_noise)
    scale = _scaling(geom, scene, side)
    total = coherent_sum(design, geom, scene, side)

    mean = np.sqrt(scale * kappa_i * kappa_a) * xi * total
    variance = scale * (kappa_i + kappa_a + 1) * num_elements
    second_moment = scale * kappa_i * kappa_a * xi ** 2 * abs(total) ** 2 + variance
    if exact_diagonal:
        extra = moment_discrepancy(design, geom, scene, side)
        variance += extra
        second_moment += extra
    return ChannelMoments(mean, second_moment, variance)
