"""These are just a handful of functions which are useful only for helping run
certain tests

Note: These tests aren't automatically run by pytest, but can be manually run
by calling pytest on this file"""

import numpy as np

from StarRisNoma.beamforming import optimal_phases
from StarRisNoma.geometry_channel import SIDES, SceneConfig, derive_geometry, draw_channels, equivalent_channel
from StarRisNoma.noise_sampling import PhaseNoiseModel, RngStream


def make_small_scene(side_length=4, **changes):
    """The default scene with square panels of ``side_length**2`` elements"""
    scene = SceneConfig(n_t_x=side_length, n_t_y=side_length,
                        n_r_x=side_length, n_r_y=side_length)
    if changes:
        scene = scene.replace(**changes)
    return scene


def make_system(scene=None, design=None):
    """Geometry and phase design of a scene (optimal phases by default)"""
    if scene is None:
        scene = make_small_scene()
    geom = derive_geometry(scene)
    if design is None:
        design = optimal_phases(geom, scene)
    return scene, geom, design


def sample_equivalent_channels(scene, geom, design, count, seed=0):
    """Draws ``count`` independent realizations of both equivalent channels

    :returns: ``(h_t, h_r)`` complex arrays of length ``count``
    """
    real = draw_channels(scene, geom, RngStream(seed=seed), size=count)
    return tuple(equivalent_channel(real, design, geom, side) for side in SIDES)


def within_standard_errors(samples, expected, count=4):
    """Whether the mean of a set of real samples lies within ``count``
    standard errors of the expected value"""
    samples = np.asarray(samples, dtype=float)
    stderr = samples.std(ddof=1) / np.sqrt(samples.size)
    return abs(samples.mean() - expected) <= count * stderr


def test_make_small_scene():
    scene = make_small_scene(3, phase_noise=PhaseNoiseModel(kind="uniform", power=0.1))
    assert scene.num_elements("t") == 9
    assert scene.num_elements("r") == 9
    assert scene.phase_noise.kind == "uniform"


def test_sample_equivalent_channels():
    scene, geom, design = make_system()
    h_t, h_r = sample_equivalent_channels(scene, geom, design, 10, seed=3)
    assert h_t.shape == (10,)
    assert h_r.shape == (10,)
    again_t, again_r = sample_equivalent_channels(scene, geom, design, 10, seed=3)
    assert (h_t == again_t).all()
    assert (h_r == again_r).all()
