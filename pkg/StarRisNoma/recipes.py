"""Pre-built sweeps for the standard evaluation curves, sized to run on a desk
machine. Each recipe is a named, ordered collection of labelled ``SweepSpec``
curves built from a base scene (the defaults of ``SceneConfig`` unless another
scene is given), so a configuration file changes the system under every recipe
at once.

========= ==================================================================
recipe    curves
========= ==================================================================
fig3      N-MSE vs SNR, LMMSE over a hardware-quality x pilot-length grid,
          plus LS references
fig3b     N-MSE vs pilot length at 0 dB, hardware-quality grid
fig4a     sum-rate vs SNR, phase-noise grid for both noise models
fig4b     sum-rate vs number of elements per panel, phase-noise grid
fig4c     sum-rate vs pilot length, phase-noise grid
fig5      sum-rate vs SNR, optimal vs random phases for 400 and 800 elements
fig6      rate pairs vs time-sharing / OMA fraction at asymmetric SNRs
fig7      rate pairs vs fraction with genie CSI, equal SNRs, hardware grid
fig8      rate pairs vs fraction with genie CSI, 20/-20 dB, hardware grid
fig9      sum-rate vs SNR with imperfect SIC, residual x hardware grid
========= ==================================================================
"""

import numpy as np

from .error_handling import InvalidRecipeException
from .estimation import PilotConfig
from .experiments import DEFAULT_TRIALS, SweepSpec
from .geometry_channel import SceneConfig
from .noise_sampling import PhaseNoiseModel
from .utils import panel_shape

__all__ = ["Recipe", "figure_recipes", "verify_recipe", "VALID_RECIPES",
           "RECIPE_SEED"]

RECIPE_SEED = 1

VALID_RECIPES = ("fig3", "fig3b", "fig4a", "fig4b", "fig4c", "fig5", "fig6",
                 "fig7", "fig8", "fig9")

PHASE_NOISE_POWERS = (0.1, 0.8)
FRACTIONS = tuple(np.round(np.arange(0.01, 1.0, 0.02), 10))


def _grid(start, stop, step):
    """Inclusive, rounded range of axis values"""
    return tuple(np.round(np.arange(start, stop + step / 2, step), 10))


class Recipe(object):
    """A named, ordered set of sweeps"""

    def __init__(self, name, description, curves):
        """
        :param name: name of the recipe, also the stem of its output files
        :param description: one line describing what the recipe shows
        :param curves: list of :class:`StarRisNoma.experiments.SweepSpec` with
            unique labels
        """
        labels = [spec.label for spec in curves]
        if len(set(labels)) != len(labels):
            raise InvalidRecipeException(
                name, "Curve labels of recipe %s are not unique: %r" % (name, labels))
        self.name = name
        self.description = description
        self.curves = list(curves)

    def resolved(self, trials=None, seed=None):
        """Returns the curves with the trial count and seed overridden

        :param trials: number of trials per point, or None to keep each curve's
        :param seed: seed, or None to keep each curve's
        :returns: list of :class:`StarRisNoma.experiments.SweepSpec`
        """
        changes = dict()
        if trials is not None:
            changes["trials"] = trials
        if seed is not None:
            changes["seed"] = seed
        if len(changes) == 0:
            return list(self.curves)
        return [spec.replace(**changes) for spec in self.curves]

    def __iter__(self):
        return iter(self.curves)

    def __len__(self):
        return len(self.curves)

    def __repr__(self):
        return "Recipe(%s, %i curves)" % (self.name, len(self.curves))


def _hardware(scene, eps):
    return scene.replace(eps_v=eps, eps_ut=eps, eps_ur=eps)


def _phase_noise_grid(scene):
    """The ideal surface and every combination of noise model and power"""
    yield "ideal", scene.replace(phase_noise=PhaseNoiseModel())
    for kind in ("vonmises", "uniform"):
        for power in PHASE_NOISE_POWERS:
            yield "%s_%g" % (kind, power), scene.replace(
                phase_noise=PhaseNoiseModel(kind=kind, power=power))


def _fig3(base):
    curves = list()
    for eps in (1.0, 1 - 1e-2, 1 - 1e-1):
        for K in (2, 50):
            for estimator in ("lmmse", "ls"):
                if estimator == "ls" and K != 2:
                    continue
                curves.append(base.replace(
                    label="%s_eps%g_K%i" % (estimator, eps, K),
                    scene=_hardware(base.scene, eps),
                    pilots=base.pilots.replace(K=K), estimator=estimator,
                    axis="snr_db", axis_values=_grid(-10, 60, 10)))
    return Recipe("fig3", "N-MSE versus SNR for several hardware qualities and "
                  "pilot lengths", curves)


def _fig3b(base):
    curves = [base.replace(label="lmmse_eps%g" % eps,
                           scene=_hardware(base.scene, eps),
                           axis="pilot_len_K", axis_values=(2, 10, 50, 200, 1000))
              for eps in (1.0, 1 - 1e-2, 1 - 1e-1)]
    return Recipe("fig3b", "N-MSE versus pilot length at 0 dB", curves)


def _phase_noise_recipe(base, name, description, axis, values):
    curves = [base.replace(label=label, scene=scene, axis=axis, axis_values=values)
              for label, scene in _phase_noise_grid(base.scene)]
    return Recipe(name, description, curves)


def _fig5(base):
    curves = list()
    for n_elements in (400, 800):
        for design in ("optimal", "random"):
            curves.append(base.replace(
                label="%s_N%i" % (design, n_elements),
                scene=_element_count_scene(base.scene, n_elements),
                phase_design=design, axis="snr_db", axis_values=_grid(-10, 30, 5)))
    return Recipe("fig5", "Sum-rate with optimal and random phases for 400 and "
                  "800 elements per panel", curves)


def _element_count_scene(scene, n_elements):
    n_x, n_y = panel_shape(n_elements)
    return scene.replace(n_t_x=n_x, n_t_y=n_y, n_r_x=n_x, n_r_y=n_y)


def _fig6(base):
    scene = base.scene.replace(
        phase_noise=PhaseNoiseModel(kind="uniform", power=0.1))
    curves = [base.replace(label="snr%g_%g" % (snr_t, snr_t + offset), scene=scene,
                           pilots=base.pilots.replace(K=2), snr_db=snr_t,
                           snr_offset_r_db=offset, axis="fraction_B_or_beta",
                           axis_values=FRACTIONS)
              for snr_t, offset in ((0, 0), (10, -20), (20, -40))]
    return Recipe("fig6", "Per-user rates versus the NOMA time-sharing and OMA "
                  "resource fractions", curves)


def _genie_recipe(base, name, description, snr_t, offset):
    curves = [base.replace(label="genie_eps%g" % eps,
                           scene=_hardware(base.scene, eps), estimator="genie",
                           snr_db=snr_t, snr_offset_r_db=offset,
                           axis="fraction_B_or_beta", axis_values=FRACTIONS)
              for eps in (1.0, 1 - 1e-4, 1 - 1e-3)]
    return Recipe(name, description, curves)


def _fig9(base):
    curves = list()
    for eta in (0.0, 0.1, 0.3):
        for eps in (1.0, 1 - 1e-3, 1 - 1e-2):
            curves.append(base.replace(
                label="eta%g_eps%g" % (eta, eps), scene=_hardware(base.scene, eps),
                pilots=base.pilots.replace(K=2), sic="imperfect", eta=eta,
                beta=None, axis="snr_db", axis_values=_grid(-10, 50, 10)))
    return Recipe("fig9", "Sum-rate with imperfect SIC and the optimal decoding "
                  "order", curves)


def figure_recipes(scene=None, pilots=None, trials=DEFAULT_TRIALS, seed=RECIPE_SEED):
    """Builds every recipe from a base system

    :param scene: base :class:`StarRisNoma.geometry_channel.SceneConfig`.
        Defaults to ``SceneConfig()``
    :param pilots: base :class:`StarRisNoma.estimation.PilotConfig`. Defaults
        to ``PilotConfig()``
    :param trials: trials per point of every curve
    :param seed: seed of every curve
    :returns: a dict of ``{name: Recipe}`` in the order of ``VALID_RECIPES``
    """
    base = SweepSpec(scene=scene if scene is not None else SceneConfig(),
                     pilots=pilots if pilots is not None else PilotConfig(),
                     trials=trials, seed=seed)
    recipes = [
        _fig3(base),
        _fig3b(base),
        _phase_noise_recipe(base, "fig4a", "Sum-rate versus SNR under phase noise",
                            "snr_db", _grid(-10, 30, 5)),
        _phase_noise_recipe(base, "fig4b", "Sum-rate versus the number of elements "
                            "per panel under phase noise", "n_elements",
                            (100, 200, 400, 800, 1600)),
        _phase_noise_recipe(base, "fig4c", "Sum-rate versus pilot length under "
                            "phase noise", "pilot_len_K", (2, 5, 10, 20, 50, 100, 200)),
        _fig5(base),
        _fig6(base),
        _genie_recipe(base, "fig7", "Rates with perfect channel knowledge at equal "
                      "SNRs", 0, 0),
        _genie_recipe(base, "fig8", "Rates with perfect channel knowledge at 20 and "
                      "-20 dB", 20, -40),
        _fig9(base),
    ]
    return dict((recipe.name, recipe) for recipe in recipes)


def verify_recipe(name, scene=None, pilots=None):
    """Looks up a recipe by name

    :param name: one of ``VALID_RECIPES``
    :param scene: optional base scene
    :param pilots: optional base pilot configuration
    :returns: a :class:`Recipe`
    """
    if name not in VALID_RECIPES:
        raise InvalidRecipeException(name, options=VALID_RECIPES)
    return figure_recipes(scene, pilots)[name]
