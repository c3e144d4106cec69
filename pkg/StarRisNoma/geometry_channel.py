"""The physical scene consists of an access point (AP), a transmit-side user
(UE-T), a reflect-side user (UE-R) and a STAR-RIS whose transmitting and
reflecting panels serve the two users. This module turns a ``SceneConfig`` into
link distances, path losses and arrival/departure angles, builds the LoS
steering vectors of the uniform planar panels, draws Rician channel realizations
and evaluates the equivalent scalar UE -> AP channels through the surface.

The RIS lies in the global x-z plane. Element columns run along x with spacing
``spacing_x`` and element rows along z with spacing ``spacing_y``; the boresight
is the y axis. For a unit direction ``u`` from the RIS towards a node the
elevation ``phi`` and azimuth ``varphi`` satisfy ``cos(phi) = u_z`` and
``sin(phi) cos(varphi) = u_x``, so the two phase terms of the steering vector are
exactly the projections of ``u`` onto the element grid. Both panels share this
frame. Element ``(n_x, n_y)`` has linear index ``n_y * N_x + n_x``.

All channel arrays may carry leading batch axes; the element axis is always the
last one.
"""

import math

import numpy as np
from pydantic import BaseModel, Field, model_validator

from .error_handling import GeometryException, InvalidParameterException
from .noise_sampling import PhaseNoiseModel, as_generator, sample_cscg, sample_phase_noise

__all__ = ["SceneConfig", "LinkGeometry", "ChannelRealization",
           "derive_geometry", "los_vector", "draw_channels",
           "equivalent_channel", "element_indices", "SIDES"]

SIDES = ("t", "r")

# 3 GHz carrier
DEFAULT_WAVELENGTH = 0.1


def _check_side(side):
    if side not in SIDES:
        raise InvalidParameterException(
            side, "Side must be 't' (transmit panel) or 'r' (reflect panel)")
    return side


class SceneConfig(BaseModel):
    """All geometry, propagation, hardware and phase-noise parameters of one
    system instance. Every quantity is in linear units and SI base units;
    decibel values are converted when configuration files are read."""

    ap_pos: tuple[float, float, float] = (0.0, -80.0, 20.0)
    uet_pos: tuple[float, float, float] = (0.0, 20.0, 5.0)
    uer_pos: tuple[float, float, float] = (0.0, -20.0, 5.0)
    ris_pos: tuple[float, float, float] = (0.0, 0.0, 15.0)

    n_t_x: int = Field(default=20, ge=1)
    n_t_y: int = Field(default=20, ge=1)
    n_r_x: int = Field(default=20, ge=1)
    n_r_y: int = Field(default=20, ge=1)

    wavelength: float = Field(default=DEFAULT_WAVELENGTH, gt=0.0)
    spacing_x: float = Field(default=DEFAULT_WAVELENGTH / 2, gt=0.0)
    spacing_y: float = Field(default=DEFAULT_WAVELENGTH / 2, gt=0.0)

    kappa_t: float = Field(default=1.0, ge=0.0)
    kappa_r: float = Field(default=1.0, ge=0.0)
    kappa_a: float = Field(default=1.0, ge=0.0)
    alpha_t: float = Field(default=2.542, gt=0.0)
    alpha_r: float = Field(default=2.542, gt=0.0)
    alpha_a: float = Field(default=2.4, gt=0.0)
    rho0: float = Field(default=1e-3, gt=0.0)
    noise_power: float = Field(default=1e-13, ge=0.0)

    eps_v: float = Field(default=1.0, ge=0.0, le=1.0)
    eps_ut: float = Field(default=1.0, ge=0.0, le=1.0)
    eps_ur: float = Field(default=1.0, ge=0.0, le=1.0)

    phase_noise: PhaseNoiseModel = PhaseNoiseModel()

    # (elevation, azimuth) in radians; None derives the angle from positions
    aoa_t: tuple[float, float] | None = None
    aoa_r: tuple[float, float] | None = None
    aod_t: tuple[float, float] | None = None
    aod_r: tuple[float, float] | None = None

    model_config = {"frozen": True}

    @model_validator(mode="before")
    @classmethod
    def _half_wavelength_spacing(cls, data):
        if isinstance(data, dict) and "wavelength" in data:
            data = dict(data)
            for key in ("spacing_x", "spacing_y"):
                if data.get(key) is None:
                    data[key] = float(data["wavelength"]) / 2
        return data

    def replace(self, **changes):
        """Returns a validated copy of this scene with some fields changed"""
        values = self.model_dump()
        values.update(changes)
        return SceneConfig(**values)

    def panel_shape(self, side):
        """``(N_x, N_y)`` of the transmit (``"t"``) or reflect (``"r"``) panel"""
        if _check_side(side) == "t":
            return self.n_t_x, self.n_t_y
        return self.n_r_x, self.n_r_y

    def num_elements(self, side):
        n_x, n_y = self.panel_shape(side)
        return n_x * n_y

    def kappa(self, side):
        return self.kappa_t if _check_side(side) == "t" else self.kappa_r

    def eps_u(self, side):
        """Hardware quality of the user transmitting through ``side``"""
        return self.eps_ut if _check_side(side) == "t" else self.eps_ur

    def user_pos(self, side):
        return self.uet_pos if _check_side(side) == "t" else self.uer_pos


class LinkGeometry(BaseModel):
    """Distances, path losses and angles derived from a scene. Angles are
    ``(elevation, azimuth)`` pairs in radians"""

    d_t: float
    d_r: float
    d_a: float
    rho_t: float
    rho_r: float
    rho_a: float
    aoa_t: tuple[float, float]
    aoa_r: tuple[float, float]
    aod_t: tuple[float, float]
    aod_r: tuple[float, float]

    model_config = {"frozen": True}

    def path_loss(self, side):
        """User-side path loss of ``side``"""
        return self.rho_t if _check_side(side) == "t" else self.rho_r

    def aoa(self, side):
        return self.aoa_t if _check_side(side) == "t" else self.aoa_r

    def aod(self, side):
        return self.aod_t if _check_side(side) == "t" else self.aod_r


class ChannelRealization(object):
    """One draw of the fading vectors and RIS phase noise. ``g_*`` are the
    UE -> RIS channels, ``a_*`` the RIS -> AP channels of each panel and
    ``theta_*`` the phase errors of each panel. Arrays may share leading batch
    axes."""

    def __init__(self, g_t, g_r, a_t, a_r, theta_t, theta_r):
        self.g_t = g_t
        self.g_r = g_r
        self.a_t = a_t
        self.a_r = a_r
        self.theta_t = theta_t
        self.theta_r = theta_r

    def user_channel(self, side):
        return self.g_t if _check_side(side) == "t" else self.g_r

    def ap_channel(self, side):
        return self.a_t if _check_side(side) == "t" else self.a_r

    def phase_noise(self, side):
        return self.theta_t if _check_side(side) == "t" else self.theta_r

    @property
    def batch_shape(self):
        return self.g_t.shape[:-1]


def _direction_angles(node, origin, name):
    """Distance and ``(elevation, azimuth)`` from ``origin`` towards ``node``"""
    offset = np.asarray(node, dtype=float) - np.asarray(origin, dtype=float)
    distance = float(np.linalg.norm(offset))
    if distance == 0.0:
        raise GeometryException(name)
    u_x, u_y, u_z = offset / distance
    elevation = math.acos(max(-1.0, min(1.0, u_z)))
    azimuth = math.atan2(u_y, u_x)
    return distance, (elevation, azimuth)


def derive_geometry(scene):
    """Computes link distances, path losses and angles of a scene

    :param scene: a :class:`SceneConfig`
    :returns: a :class:`LinkGeometry`
    """
    d_t, aoa_t = _direction_angles(scene.uet_pos, scene.ris_pos, "UE-T")
    d_r, aoa_r = _direction_angles(scene.uer_pos, scene.ris_pos, "UE-R")
    d_a, aod = _direction_angles(scene.ap_pos, scene.ris_pos, "AP")

    return LinkGeometry(
        d_t=d_t, d_r=d_r, d_a=d_a,
        rho_t=scene.rho0 * d_t ** (-scene.alpha_t),
        rho_r=scene.rho0 * d_r ** (-scene.alpha_r),
        rho_a=scene.rho0 * d_a ** (-scene.alpha_a),
        aoa_t=scene.aoa_t if scene.aoa_t is not None else aoa_t,
        aoa_r=scene.aoa_r if scene.aoa_r is not None else aoa_r,
        aod_t=scene.aod_t if scene.aod_t is not None else aod,
        aod_r=scene.aod_r if scene.aod_r is not None else aod,
    )


def element_indices(scene, side):
    """Column and row index ``(n_x, n_y)`` of every element of a panel in
    linear index order"""
    n_x, n_y = scene.panel_shape(side)
    rows, cols = np.meshgrid(np.arange(n_y), np.arange(n_x), indexing="ij")
    return cols.ravel(), rows.ravel()


def los_vector(panel, angles, geom, scene):
    """LoS steering vector of a panel for a given direction

    :param panel: ``"t"`` or ``"r"``
    :param angles: ``(elevation, azimuth)`` in radians
    :param geom: a :class:`LinkGeometry` (unused; panels share one frame)
    :param scene: a :class:`SceneConfig`
    :returns: a unit-modulus complex vector with one entry per element
    """
    elevation, azimuth = angles
    n_x, n_y = element_indices(scene, panel)
    wavenumber = 2 * np.pi / scene.wavelength
    phase = wavenumber * (scene.spacing_x * n_x * math.sin(elevation) * math.cos(azimuth) +
                          scene.spacing_y * n_y * math.cos(elevation))
    return np.exp(-1j * phase)


def draw_channels(scene, geom, rng, size=None):
    """Draws the Rician fading vectors of both panels and the RIS phase noise

    :param scene: a :class:`SceneConfig`
    :param geom: the scene's :class:`LinkGeometry`
    :param rng: an :class:`RngStream` or ``numpy.random.Generator``
    :param size: optional number of independent realizations to stack along a
        leading batch axis
    :returns: a :class:`ChannelRealization`
    """
    rng = as_generator(rng)
    batch = () if size is None else (int(size),)

    def rician(kappa, los):
        shape = batch + los.shape
        return sample_cscg(math.sqrt(kappa / (1 + kappa)) * los, 1.0 / (1 + kappa),
                           shape, rng)

    channels = dict()
    for side in SIDES:
        n = scene.num_elements(side)
        channels["theta_" + side] = sample_phase_noise(
            scene.phase_noise, batch + (n,), rng)
    for side in SIDES:
        channels["g_" + side] = rician(
            scene.kappa(side), los_vector(side, geom.aoa(side), geom, scene))
    for side in SIDES:
        channels["a_" + side] = rician(
            scene.kappa_a, los_vector(side, geom.aod(side), geom, scene))
    return ChannelRealization(**channels)


def equivalent_channel(real, design, geom, side):
    """Equivalent scalar channel from a user to the AP through its panel,
    ``sqrt(rho_i rho_a) * sum_n conj(a_n) exp(j(theta_bar_n + theta~_n)) g_n``

    :param real: a :class:`ChannelRealization`
    :param design: a :class:`StarRisNoma.beamforming.PhaseDesign`
    :param geom: the scene's :class:`LinkGeometry`
    :param side: ``"t"`` or ``"r"``
    :returns: a complex scalar, or an array over the realization's batch axes
    """
    phases = design.phases(side) + real.phase_noise(side)
    coupled = np.conj(real.ap_channel(side)) * np.exp(1j * phases) * \
        real.user_channel(side)
    return math.sqrt(geom.path_loss(side) * geom.rho_a) * coupled.sum(axis=-1)
