"""Phase designs of the STAR-RIS. Under the mode-switching protocol each element
belongs to either the transmitting or the reflecting panel, and the design only
sets the expected phase shift ``theta_bar`` of every element; the realized shift
additionally carries the random phase error drawn in
:mod:`StarRisNoma.noise_sampling`.

``optimal_phases`` co-phases the LoS components of the cascaded channel of each
panel, which maximizes the coherent sum shared by every moment of the
equivalent channel and therefore the ergodic sum-rate upper bound. It only
needs the arrival and departure angles, i.e. statistical CSI.
``random_phases`` is the baseline design with i.i.d. uniform phases.
"""

import math

import numpy as np

from .error_handling import InvalidParameterException
from .geometry_channel import SIDES, element_indices
from .noise_sampling import as_generator

__all__ = ["PhaseDesign", "wrap_phases", "optimal_phases", "random_phases"]


def wrap_phases(phases):
    """Wraps phases onto ``[0, 2*pi)``

    :param phases: array of phases in radians
    :returns: array of wrapped phases
    """
    wrapped = np.mod(np.asarray(phases, dtype=float), 2 * np.pi)
    # np.mod may round a tiny negative phase up to exactly 2*pi
    return np.where(wrapped >= 2 * np.pi, 0.0, wrapped)


class PhaseDesign(object):
    """Expected phase shifts of the transmitting and reflecting panels"""

    def __init__(self, theta_t, theta_r, name="custom"):
        """
        :param theta_t: phases of the transmitting panel (radians)
        :param theta_r: phases of the reflecting panel (radians)
        :param name: label of the rule which produced the design
        """
        self.theta_t = wrap_phases(np.atleast_1d(theta_t))
        self.theta_r = wrap_phases(np.atleast_1d(theta_r))
        self.name = name

    def phases(self, side):
        if side == "t":
            return self.theta_t
        elif side == "r":
            return self.theta_r
        raise InvalidParameterException(
            side, "Side must be 't' (transmit panel) or 'r' (reflect panel)")

    def __repr__(self):
        return "PhaseDesign(%s, N_t=%i, N_r=%i)" % (
            self.name, self.theta_t.size, self.theta_r.size)


def _matched_phases(scene, side, aoa, aod):
    elevation, azimuth = aoa
    dep_elevation, dep_azimuth = aod
    n_x, n_y = element_indices(scene, side)
    wavenumber = 2 * np.pi / scene.wavelength
    horizontal = math.sin(elevation) * math.cos(azimuth) - \
        math.sin(dep_elevation) * math.cos(dep_azimuth)
    vertical = math.cos(elevation) - math.cos(dep_elevation)
    return wavenumber * (scene.spacing_x * n_x * horizontal +
                         scene.spacing_y * n_y * vertical)


def optimal_phases(geom, scene):
    """Phase design which co-phases the LoS cascade of each panel, so that the
    coherent sum of each panel equals its number of elements

    :param geom: a :class:`StarRisNoma.geometry_channel.LinkGeometry`
    :param scene: a :class:`StarRisNoma.geometry_channel.SceneConfig`
    :returns: a :class:`PhaseDesign`
    """
    theta = [_matched_phases(scene, side, geom.aoa(side), geom.aod(side))
             for side in SIDES]
    return PhaseDesign(theta[0], theta[1], name="optimal")


def random_phases(scene, rng):
    """Phase design with i.i.d. phases uniform on ``[0, 2*pi)``

    :param scene: a :class:`StarRisNoma.geometry_channel.SceneConfig`
    :param rng: an :class:`StarRisNoma.noise_sampling.RngStream` or
        ``numpy.random.Generator``
    :returns: a :class:`PhaseDesign`
    """
    rng = as_generator(rng)
    theta = [rng.uniform(0.0, 2 * np.pi, size=scene.num_elements(side))
             for side in SIDES]
    return PhaseDesign(theta[0], theta[1], name="random")
