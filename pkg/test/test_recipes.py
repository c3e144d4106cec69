import numpy as np
import pytest

from StarRisNoma.error_handling import InvalidRecipeException
from StarRisNoma.estimation import PilotConfig
from StarRisNoma.experiments import DEFAULT_TRIALS, SweepSpec
from StarRisNoma.recipes import (FRACTIONS, RECIPE_SEED, VALID_RECIPES, Recipe, figure_recipes,
                                 verify_recipe)
from test.utils import make_small_scene


def test_figure_recipes():
    recipes = figure_recipes()
    assert tuple(recipes) == VALID_RECIPES
    for name, recipe in recipes.items():
        assert recipe.name == name
        assert len(recipe) > 0
        for spec in recipe:
            assert isinstance(spec, SweepSpec)
            assert spec.trials == DEFAULT_TRIALS
            assert spec.seed == RECIPE_SEED


def test_fig3():
    recipe = figure_recipes()["fig3"]
    labels = [spec.label for spec in recipe]
    assert len(labels) == 9
    assert "lmmse_eps0.99_K50" in labels
    assert "ls_eps1_K2" in labels
    spec = dict((spec.label, spec) for spec in recipe)["lmmse_eps0.9_K2"]
    assert spec.scene.eps_v == spec.scene.eps_ut == spec.scene.eps_ur == 0.9
    assert spec.pilots.K == 2
    assert spec.axis_values == tuple(float(v) for v in range(-10, 61, 10))


def test_phase_noise_recipes():
    for name, axis in [("fig4a", "snr_db"), ("fig4b", "n_elements"), ("fig4c", "pilot_len_K")]:
        recipe = figure_recipes()[name]
        assert [spec.label for spec in recipe] == ["ideal", "vonmises_0.1", "vonmises_0.8",
                                                   "uniform_0.1", "uniform_0.8"]
        assert all(spec.axis == axis for spec in recipe)
        kinds = [(spec.scene.phase_noise.kind, spec.scene.phase_noise.power) for spec in recipe]
        assert kinds[0] == ("none", 0.0)
        assert kinds[4] == ("uniform", 0.8)
    assert figure_recipes()["fig4b"].curves[0].axis_values == (100, 200, 400, 800, 1600)


def test_fig5():
    specs = dict((spec.label, spec) for spec in figure_recipes()["fig5"])
    assert set(specs) == {"optimal_N400", "random_N400", "optimal_N800", "random_N800"}
    assert specs["random_N800"].scene.panel_shape("t") == (25, 32)
    assert specs["random_N800"].phase_design == "random"
    assert specs["optimal_N400"].scene.num_elements("r") == 400


def test_rate_region_recipes():
    fig6 = dict((spec.label, spec) for spec in figure_recipes()["fig6"])
    assert list(fig6) == ["snr0_0", "snr10_-10", "snr20_-20"]
    spec = fig6["snr20_-20"]
    assert (spec.snr_db, spec.snr_db + spec.snr_offset_r_db) == (20, -20)
    assert spec.axis == "fraction_B_or_beta"
    assert spec.pilots.K == 2
    assert spec.scene.phase_noise.kind == "uniform"
    assert len(FRACTIONS) == 50
    assert np.isclose(FRACTIONS[0], 0.01) and np.isclose(FRACTIONS[-1], 0.99)

    for name, snr_r in [("fig7", 0), ("fig8", -20)]:
        recipe = figure_recipes()[name]
        assert [spec.label for spec in recipe] == ["genie_eps1", "genie_eps0.9999",
                                                   "genie_eps0.999"]
        for spec in recipe:
            assert spec.estimator == "genie"
            assert spec.snr_db + spec.snr_offset_r_db == snr_r


def test_fig9():
    recipe = figure_recipes()["fig9"]
    assert len(recipe) == 9
    for spec in recipe:
        assert spec.sic == "imperfect"
        assert spec.beta is None
        assert spec.axis_values[-1] == 50
    assert "eta0.3_eps0.99" in [spec.label for spec in recipe]


def test_base_system():
    scene = make_small_scene(4, eps_ur=0.5)
    recipes = figure_recipes(scene, PilotConfig(K=7), trials=10, seed=3)
    spec = recipes["fig4a"].curves[0]
    assert spec.scene.eps_ur == 0.5
    assert spec.pilots.K == 7
    assert spec.trials == 10
    assert spec.seed == 3
    # a recipe's own hardware grid replaces the base qualities
    assert recipes["fig3"].curves[0].scene.eps_ur == 1.0
    # and a recipe's own pilot length replaces the base one
    assert recipes["fig6"].curves[0].pilots.K == 2


def test_recipe():
    specs = [SweepSpec(label="a"), SweepSpec(label="b", seed=4)]
    recipe = Recipe("test", "two curves", specs)
    assert len(recipe) == 2
    assert "test" in repr(recipe)
    assert recipe.resolved() == specs
    resolved = recipe.resolved(trials=5, seed=2)
    assert [spec.trials for spec in resolved] == [5, 5]
    assert [spec.seed for spec in resolved] == [2, 2]
    assert recipe.resolved(trials=5)[1].seed == 4

    with pytest.raises(InvalidRecipeException):
        Recipe("test", "duplicate labels", [SweepSpec(label="a"), SweepSpec(label="a")])


def test_verify_recipe():
    assert verify_recipe("fig9").name == "fig9"
    with pytest.raises(InvalidRecipeException) as error:
        verify_recipe("fig10")
    assert "fig3" in str(error.value)
