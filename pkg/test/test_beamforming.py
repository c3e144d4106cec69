import math

import numpy as np
import pytest

from StarRisNoma.beamforming import PhaseDesign, optimal_phases, random_phases, wrap_phases
from StarRisNoma.error_handling import InvalidParameterException
from StarRisNoma.geometry_channel import SceneConfig, derive_geometry
from StarRisNoma.noise_sampling import RngStream
from StarRisNoma.statistics import coherent_sum


def test_wrap_phases():
    wrapped = wrap_phases([0, -0.5, 2 * math.pi, 7.0, -1e-20, 4 * math.pi + 1])
    assert np.all(wrapped >= 0)
    assert np.all(wrapped < 2 * math.pi)
    assert np.allclose(wrapped, [0, 2 * math.pi - 0.5, 0, 7.0 - 2 * math.pi, 0, 1])


def test_phase_design():
    design = PhaseDesign([0.0, -1.0], [2 * math.pi, 1.0], name="test")
    assert np.allclose(design.phases("t"), [0.0, 2 * math.pi - 1.0])
    assert np.allclose(design.phases("r"), [0.0, 1.0])
    assert "test" in repr(design)
    with pytest.raises(InvalidParameterException):
        design.phases("a")


def test_optimal_phases():
    for scene in [SceneConfig(), SceneConfig(n_r_x=25, n_r_y=32, uet_pos=(3.0, 25.0, 2.0))]:
        geom = derive_geometry(scene)
        design = optimal_phases(geom, scene)
        assert design.name == "optimal"
        for side in ["t", "r"]:
            assert design.phases(side).shape == (scene.num_elements(side),)
            total = coherent_sum(design, geom, scene, side)
            assert abs(total - scene.num_elements(side)) < 1e-9 * scene.num_elements(side)


def test_random_phases():
    scene = SceneConfig(n_t_x=8, n_t_y=8, n_r_x=8, n_r_y=8)
    geom = derive_geometry(scene)
    best = abs(coherent_sum(optimal_phases(geom, scene), geom, scene, "t"))

    first = random_phases(scene, RngStream(seed=4))
    again = random_phases(scene, RngStream(seed=4))
    assert first.name == "random"
    assert (first.phases("t") == again.phases("t")).all()
    assert np.all(first.phases("r") >= 0)
    assert np.all(first.phases("r") < 2 * math.pi)

    generator = RngStream(seed=5).generator()
    for _ in range(1000):
        design = random_phases(scene, generator)
        assert abs(coherent_sum(design, geom, scene, "t")) <= best + 1e-9
