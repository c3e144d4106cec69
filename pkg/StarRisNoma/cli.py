"""Command-line front end. It loads the system from a configuration file, runs
either a named recipe or the sweep described inline in the configuration file,
and writes

- ``<name>.csv``, one row per curve, axis value and metric, with every number
  written with 17 significant digits so that re-reading it is exact, and
- ``<name>.meta``, a JSON record of every resolved sweep, the seed, the trial
  count and the package version,

then prints the largest relative deviation of every Monte Carlo series from
its closed form. ``--validate`` only resolves the configuration and prints the
derived geometry.

Exit status is 0 on success, 2 for configuration and sweep errors and 3
for any other failure.
"""

import argparse
import json
import logging
import math
import os
import sys

import pandas as pd
from pydantic import BaseModel, Field, ValidationError

from . import __version__
from .beamforming import optimal_phases
from .config import load_config, load_sweep
from .error_handling import ConfigException, InvalidRecipeException, InvalidSweepException
from .estimation import PilotConfig
from .experiments import run_recipe
from .geometry_channel import SIDES, SceneConfig, derive_geometry
from .noise_sampling import xi_factor
from .recipes import Recipe, verify_recipe
from .result import write_results
from .statistics import moment_discrepancy
from .utils import linear_to_db

__all__ = ["RunManifest", "run", "validate", "main", "EXIT_OK",
           "EXIT_CONFIG_ERROR", "EXIT_RUNTIME_ERROR"]

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG_ERROR = 2
EXIT_RUNTIME_ERROR = 3


class RunManifest(BaseModel):
    """What to run and where to put the output"""

    config_path: str | None = None
    recipe: str | None = None
    out_dir: str = "."
    seed: int | None = Field(default=None, ge=0, lt=2 ** 64)
    trials: int | None = Field(default=None, ge=1)
    jobs: int = 1

    model_config = {"frozen": True}


def _load_system(manifest):
    """:returns: ``(scene, pilots, inline_sweep)``"""
    if manifest.config_path is None:
        return SceneConfig(), PilotConfig(), None
    scene, pilots = load_config(manifest.config_path)
    return scene, pilots, load_sweep(manifest.config_path)


def _resolve_recipe(manifest):
    """Turns the manifest into the recipe to run. Exactly one of a named recipe
    or an inline sweep must be given"""
    scene, pilots, inline = _load_system(manifest)
    if manifest.recipe is not None and inline is not None:
        raise InvalidSweepException(
            "recipe", "Give either --recipe or an inline sweep in %s, not both"
            % manifest.config_path)
    if manifest.recipe is not None:
        return verify_recipe(manifest.recipe, scene, pilots)
    if inline is None:
        raise InvalidSweepException(
            "recipe", "Nothing to run: give --recipe or a configuration with sweep_axis")
    return Recipe(inline.label, "inline sweep from %s" % manifest.config_path, [inline])


def _write_outputs(recipe, result, manifest):
    os.makedirs(manifest.out_dir, exist_ok=True)
    csv_path = os.path.join(manifest.out_dir, "%s.csv" % recipe.name)
    meta_path = os.path.join(manifest.out_dir, "%s.meta" % recipe.name)

    write_results(result, csv_path)
    meta = {"recipe": recipe.name,
            "description": recipe.description,
            "version": __version__,
            "seed": manifest.seed,
            "trials": manifest.trials,
            "curves": [spec.model_dump(mode="json") for spec in
                       recipe.resolved(trials=manifest.trials, seed=manifest.seed)]}
    with open(meta_path, "w") as handle:
        json.dump(meta, handle, indent=2, sort_keys=True)
        handle.write("\n")
    logger.info("Wrote %s and %s", csv_path, meta_path)
    return csv_path, meta_path


def run(manifest):
    """Runs the recipe or inline sweep of a manifest and writes its outputs

    :param manifest: a :class:`RunManifest`
    :returns: the exit status
    """
    recipe = _resolve_recipe(manifest)
    logger.info("Running %s: %s (%i curves)", recipe.name, recipe.description,
                len(recipe))
    result = run_recipe(recipe, trials=manifest.trials, seed=manifest.seed,
                        jobs=manifest.jobs)
    _write_outputs(recipe, result, manifest)

    summary = result.summary()
    if len(summary) == 0:
        print("%s: no series with a closed form" % recipe.name)
    else:
        print("Largest relative deviation from the closed forms (%s)" % recipe.name)
        print(summary.to_string())
    return EXIT_OK


def validate(manifest):
    """Resolves the configuration and reports the derived quantities without
    simulating

    :param manifest: a :class:`RunManifest`
    :returns: a dataframe of derived quantities, indexed by name
    """
    scene, pilots, inline = _load_system(manifest)
    if manifest.recipe is not None:
        verify_recipe(manifest.recipe, scene, pilots)
    geom = derive_geometry(scene)
    design = optimal_phases(geom, scene)

    rows = [("d_t [m]", geom.d_t), ("d_r [m]", geom.d_r), ("d_a [m]", geom.d_a),
            ("path loss UE-T [dB]", float(linear_to_db(geom.rho_t))),
            ("path loss UE-R [dB]", float(linear_to_db(geom.rho_r))),
            ("path loss AP [dB]", float(linear_to_db(geom.rho_a)))]
    for side in SIDES:
        for name, angles in (("AoA", geom.aoa(side)), ("AoD", geom.aod(side))):
            rows.append(("%s %s elevation [deg]" % (name, side), math.degrees(angles[0])))
            rows.append(("%s %s azimuth [deg]" % (name, side), math.degrees(angles[1])))
    rows.append(("xi", xi_factor(scene.phase_noise)))
    for side in SIDES:
        rows.append(("elements %s" % side, scene.num_elements(side)))
        rows.append(("moment correction %s" % side,
                     moment_discrepancy(design, geom, scene, side)))
    rows.append(("pilot length K", pilots.K))
    if inline is not None:
        rows.append(("inline sweep points", len(inline.axis_values)))
    return pd.DataFrame(rows, columns=["quantity", "value"]).set_index("quantity")


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="star-noma",
        description="Monte Carlo simulation of a STAR-RIS assisted NOMA uplink "
                    "with imperfect CSI and hardware impairments")
    parser.add_argument("--config", help="configuration file (key = value lines)")
    parser.add_argument("--recipe", help="name of a pre-built sweep, e.g. fig4a")
    parser.add_argument("--trials", type=int, help="trials per sweep point")
    parser.add_argument("--seed", type=int, help="seed of every sweep")
    parser.add_argument("--out", default=".", help="output directory")
    parser.add_argument("--validate", action="store_true",
                        help="print derived quantities and exit without simulating")
    parser.add_argument("--jobs", type=int, default=1,
                        help="worker processes; 0 or less counts back from the cpu count")
    parser.add_argument("--verbose", action="store_true", help="log debug messages")
    return parser


def main(argv=None):
    """Entry point of the ``star-noma`` command

    :param argv: argument list, defaults to ``sys.argv[1:]``
    :returns: the exit status
    """
    args = _build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO,
                        format="%(asctime)s %(name)s %(levelname)s: %(message)s")
    logging.captureWarnings(True)

    try:
        manifest = RunManifest(config_path=args.config, recipe=args.recipe,
                               out_dir=args.out, seed=args.seed, trials=args.trials,
                               jobs=args.jobs)
        if args.validate:
            print(validate(manifest).to_string())
            return EXIT_OK
        return run(manifest)
    except (ConfigException, InvalidRecipeException, InvalidSweepException,
            ValidationError) as error:
        logger.error("%s", error)
        return EXIT_CONFIG_ERROR
    except OSError as error:
        if args.config is not None and getattr(error, "filename", None) == args.config:
            logger.error("Cannot read configuration: %s", error)
            return EXIT_CONFIG_ERROR
        logger.exception("Run failed")
        return EXIT_RUNTIME_ERROR
    except Exception:
        logger.exception("Run failed")
        return EXIT_RUNTIME_ERROR


if __name__ == "__main__":
    sys.exit(main())
