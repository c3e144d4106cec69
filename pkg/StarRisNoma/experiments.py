"""The Monte Carlo engine behind every curve. A ``SweepSpec`` names the system,
the swept axis and its values, the estimator, the SIC model and the phase
design. For each axis value the engine solves the transmit powers from the SNR
target, then runs ``trials`` independent trials of

    channel draw -> pilot transmission -> channel estimation -> rates

and reports the Monte Carlo mean and standard error of every metric, next to
its closed-form counterpart where the analysis provides one:

============== ==========================================================
metric         closed form
============== ==========================================================
nmse           N-MSE of the LMMSE (or LS) estimator; 0 with genie CSI
rate_t         --
rate_r         --
sum_rate       ergodic upper bound (perfect SIC, LMMSE or genie CSI)
rate_t_oma     --
rate_r_oma     --
sum_rate_oma   --
============== ==========================================================

Trials are grouped in fixed-size blocks. Block ``b`` of every point draws from
the stream ``RngStream(seed, b)``, so the result depends only on the sweep and
never on the number of worker processes, and neighbouring axis values share
their random numbers, which keeps the curves smooth. Blocks run either in the
current process or on a pool of worker processes (see
:mod:`StarRisNoma.multiprocessing_utils`).

The average received SNR of user ``i`` is ``gamma_i = rho_i rho_a rho_ui /
sigma_w^2`` (path losses ``rho_a`` of the AP link and ``rho_ui`` of the user
link). Pilots are sent with the data transmit power.
"""

import logging
import math
import warnings

import numpy as np
from pydantic import BaseModel, Field, model_validator
from scipy.optimize import brentq

from .beamforming import optimal_phases, random_phases
from .data_verification import verify_axis_values
from .error_handling import (ClosedFormDiscrepancyWarning,
                             InvalidParameterException, InvalidSweepException)
from .estimation import (ESTIMATORS, PilotConfig, estimate_channels,
                         ls_nmse_closed_form, nmse_closed_form, simulate_pilot_rx)
from .geometry_channel import SIDES, SceneConfig, derive_geometry, draw_channels, equivalent_channel
from .metrics import beyond_standard_errors, summarize
from .multiprocessing_utils import pool_imap_unordered, resolve_jobs
from .noise_sampling import RngStream
from .rates import RateInputs, ergodic_sum_upper_bound, optimal_decoding_fraction, rate_report
from .result import SeriesResult, SweepResult
from .statistics import channel_moments
from .sweep_axes import verify_sweep_axis
from .utils import db_to_linear

__all__ = ["SweepSpec", "run_sweep", "run_recipe", "simulate_block",
           "equal_rate_crossing", "solve_powers", "METRICS",
           "DEFAULT_TRIALS", "BLOCK_SIZE"]

logger = logging.getLogger(__name__)

METRICS = ("nmse", "rate_t", "rate_r", "sum_rate", "rate_t_oma", "rate_r_oma",
           "sum_rate_oma")
SIC_MODELS = ("perfect", "imperfect")
PHASE_DESIGNS = ("optimal", "random")

DEFAULT_TRIALS = 10000
BLOCK_SIZE = 500
# stream of the random phase design; trial blocks use ids from 0 upwards
DESIGN_STREAM_ID = 2 ** 63


class SweepSpec(BaseModel):
    """A complete, reproducible description of one Monte Carlo curve"""

    label: str = "sweep"
    scene: SceneConfig = Field(default_factory=SceneConfig)
    pilots: PilotConfig = Field(default_factory=PilotConfig)
    axis: str = "snr_db"
    axis_values: tuple[float, ...] = (0.0,)
    trials: int = Field(default=DEFAULT_TRIALS, ge=1)
    seed: int = Field(default=0, ge=0, lt=2 ** 64)
    estimator: str = "lmmse"
    sic: str = "perfect"
    eta: float = Field(default=0.0, ge=0.0, le=1.0)
    # None decodes the weaker user first in every realization
    beta: float | None = Field(default=0.5, ge=0.0, le=1.0)
    fraction_b: float = Field(default=0.5, ge=0.0, le=1.0)
    phase_design: str = "optimal"
    snr_db: float = 0.0
    snr_offset_r_db: float = 0.0
    exact_moments: bool = False

    model_config = {"frozen": True}

    @model_validator(mode="after")
    def _check_choices(self):
        verify_sweep_axis(self.axis)
        verify_axis_values(self.axis, self.axis_values)
        for field, value, options in (("estimator", self.estimator, ESTIMATORS),
                                      ("sic", self.sic, SIC_MODELS),
                                      ("phase_design", self.phase_design, PHASE_DESIGNS)):
            if value not in options:
                raise InvalidSweepException(
                    field, "%s must be one of %s, not %r" % (field, ", ".join(options), value))
        if self.estimator == "ls" and (self.scene.eps_v == 0 or
                                       min(self.scene.eps_ut, self.scene.eps_ur) == 0):
            raise InvalidSweepException(
                "estimator", "LS estimation is undefined with zero hardware quality")
        return self

    def replace(self, **changes):
        """Returns a validated copy of this spec with some fields changed"""
        values = dict(self)
        values.update(changes)
        return SweepSpec(**values)


class _PointContext(object):
    """Everything a worker needs to simulate the trials of one sweep point"""

    def __init__(self, spec, point, geom, design, pilots, powers):
        self.label = spec.label
        self.axis = spec.axis
        self.seed = spec.seed
        self.estimator = spec.estimator
        self.imperfect = spec.sic == "imperfect"
        self.exact_moments = spec.exact_moments
        self.index = point.index
        self.value = point.value
        self.scene = point.scene
        self.eta = point.eta
        self.beta = point.beta
        self.fraction_b = point.fraction_b
        self.geom = geom
        self.design = design
        self.pilots = pilots
        self.powers = powers
        self.variances = tuple(
            channel_moments(design, geom, point.scene, side, spec.exact_moments).variance
            for side in SIDES)


def solve_powers(snr_t_db, snr_r_db, geom, scene):
    """Transmit powers reaching the target average received SNRs,
    ``rho_i = gamma_i sigma_w^2 / (rho_a rho_ui)``. With equal targets both
    users use the power solved from the UE-T link

    :returns: ``(rho_t, rho_r)`` in watts
    """
    rho_t = float(db_to_linear(snr_t_db)) * scene.noise_power / (geom.rho_a * geom.rho_t)
    if snr_r_db == snr_t_db:
        return rho_t, rho_t
    rho_r = float(db_to_linear(snr_r_db)) * scene.noise_power / (geom.rho_a * geom.rho_r)
    return rho_t, rho_r


def _prepare_point(spec, point):
    geom = derive_geometry(point.scene)
    if spec.phase_design == "optimal":
        design = optimal_phases(geom, point.scene)
    else:
        design = random_phases(point.scene, RngStream(
            seed=spec.seed, stream_id=DESIGN_STREAM_ID))
    powers = solve_powers(point.snr_t_db, point.snr_r_db, geom, point.scene)
    pilots = spec.pilots.replace(K=point.K, p_t=powers[0], p_r=powers[1])
    return _PointContext(spec, point, geom, design, pilots, powers)


def simulate_block(context, block_index, count):
    """Runs one block of trials of a sweep point

    :param context: the prepared point
    :param block_index: index of the block, which selects its random stream
    :param count: number of trials in the block
    :returns: a dict of per-trial samples for every name in ``METRICS``
    """
    rng = RngStream(seed=context.seed, stream_id=block_index).generator()
    scene, geom, design = context.scene, context.geom, context.design

    real = draw_channels(scene, geom, rng, size=count)
    channels = tuple(equivalent_channel(real, design, geom, side) for side in SIDES)
    if context.estimator == "genie":
        estimates = channels
        err_variances = (0.0, 0.0)
    else:
        observations = simulate_pilot_rx(real, design, geom, scene, context.pilots,
                                         rng, equivalent=channels)
        outcome = estimate_channels(observations, design, geom, scene, context.pilots,
                                    context.estimator, context.exact_moments)
        estimates = (outcome.h_hat_t, outcome.h_hat_r)
        err_variances = (outcome.err_variance_t, outcome.err_variance_r)

    nmse = 0.5 * sum(np.abs(h - h_hat) ** 2 / variance for h, h_hat, variance
                     in zip(channels, estimates, context.variances))

    inputs = RateInputs.from_scene(
        scene, estimates[0], estimates[1], err_variances[0], err_variances[1],
        context.powers[0], context.powers[1], eta=context.eta,
        beta=0.0 if context.beta is None else context.beta,
        fraction_b=context.fraction_b)
    if context.beta is None:
        inputs = inputs.replace(beta=optimal_decoding_fraction(inputs))
    report = rate_report(inputs, imperfect=context.imperfect)

    samples = {"nmse": nmse,
               "rate_t": report.R_t_noma,
               "rate_r": report.R_r_noma,
               "sum_rate": report.R_sum_noma,
               "rate_t_oma": report.R_t_oma,
               "rate_r_oma": report.R_r_oma,
               "sum_rate_oma": report.R_sum_oma}
    return dict((name, np.broadcast_to(value, (count,)).astype(float))
                for name, value in samples.items())


def _closed_forms(context):
    closed = dict.fromkeys(METRICS)
    args = (context.design, context.geom, context.scene, context.pilots)
    if context.estimator == "genie":
        closed["nmse"] = 0.0
    elif context.estimator == "lmmse":
        closed["nmse"] = nmse_closed_form(*args, exact_diagonal=context.exact_moments)
    else:
        closed["nmse"] = ls_nmse_closed_form(*args, exact_diagonal=context.exact_moments)
    if not context.imperfect and context.estimator != "ls":
        pilots = None if context.estimator == "genie" else context.pilots
        closed["sum_rate"] = ergodic_sum_upper_bound(
            context.design, context.geom, context.scene, pilots, context.powers,
            exact_diagonal=context.exact_moments)
    return closed


def _block_sizes(trials, block_size):
    full, remainder = divmod(trials, block_size)
    return [block_size] * full + ([remainder] if remainder else [])


def _singlethread_iteration(tasks):
    """Runs the blocks in the current process

    :param tasks: an iterable of ``(key, context, block_index, count)``
    :returns: a dict of ``{key: samples}``
    """
    result = dict()
    for key, context, block_index, count in tasks:
        logger.debug("%s: block %i of point %i (%i trials)", context.label,
                     block_index, context.index, count)
        result[key] = simulate_block(context, block_index, count)
    return result


def _multithread_iteration(tasks, jobs):
    """Runs the blocks on a pool of ``jobs`` worker processes

    :param tasks: an iterable of ``(key, context, block_index, count)``
    :param jobs: number of processes to use
    :returns: a dict of ``{key: samples}``
    """
    result = dict()
    for key, samples in pool_imap_unordered(simulate_block, tasks, jobs):
        result[key] = samples
    return result


def run_sweep(spec, jobs=1, block_size=BLOCK_SIZE):
    """Runs the Monte Carlo sweep described by a spec

    :param spec: a :class:`SweepSpec`
    :param jobs: number of worker processes. If zero or negative, uses
        ``num_cpus + jobs``. Defaults to 1
    :param block_size: number of trials simulated together. Changing it changes
        the random draws, so keep the default for reproducible output
    :returns: a :class:`StarRisNoma.result.SweepResult` with one
        :class:`StarRisNoma.result.SeriesResult` per axis value and metric
    """
    axis = verify_sweep_axis(spec.axis)(spec)
    contexts = [_prepare_point(spec, point) for point in axis]
    blocks = _block_sizes(spec.trials, block_size)
    jobs = resolve_jobs(jobs)
    logger.info("%s: %i points along %s, %i trials each in %i blocks, %i job(s)",
                spec.label, len(contexts), spec.axis, spec.trials, len(blocks), jobs)

    tasks = (((context.index, block_index), context, block_index, count)
             for context in contexts
             for block_index, count in enumerate(blocks))
    if jobs == 1:
        samples = _singlethread_iteration(tasks)
    else:
        samples = _multithread_iteration(tasks, jobs)

    result = SweepResult(spec.label)
    for context in contexts:
        closed = _closed_forms(context)
        rows = list()
        for metric in METRICS:
            values = np.concatenate([samples[(context.index, block_index)][metric]
                                     for block_index in range(len(blocks))])
            mean, stderr = summarize(values)
            if metric == "nmse" and context.estimator != "genie" and \
                    beyond_standard_errors(mean, stderr, closed[metric]):
                warnings.warn(
                    "%s at %s=%g: Monte Carlo N-MSE %.6g is more than 4 standard errors "
                    "(%.3g) from the closed form %.6g" % (
                        spec.label, spec.axis, context.value, mean, stderr, closed[metric]),
                    ClosedFormDiscrepancyWarning)
            rows.append(SeriesResult(spec.label, spec.axis, context.value, metric,
                                     mean, stderr, closed[metric], spec.trials,
                                     spec.seed))
        result.add_series(rows)
        logger.info("%s: %s=%g done", spec.label, spec.axis, context.value)
    return result


def run_recipe(recipe, trials=None, seed=None, jobs=1):
    """Runs every curve of a recipe

    :param recipe: a :class:`StarRisNoma.recipes.Recipe`
    :param trials: optional override of the number of trials of every curve
    :param seed: optional override of the seed of every curve
    :param jobs: number of worker processes
    :returns: a :class:`StarRisNoma.result.SweepResult` holding all curves
    """
    result = SweepResult(recipe.name)
    for spec in recipe.resolved(trials=trials, seed=seed):
        logger.info("%s: running curve %s", recipe.name, spec.label)
        result.extend(run_sweep(spec, jobs=jobs))
    return result


def equal_rate_crossing(result, curve, metric_t="rate_t", metric_r="rate_r"):
    """Finds where two per-user rate curves cross, e.g. the fairness point of a
    sweep over the time-sharing or OMA fraction

    :param result: a :class:`StarRisNoma.result.SweepResult`
    :param curve: label of the curve
    :param metric_t: metric of the first user
    :param metric_r: metric of the second user
    :returns: ``(axis_value, rate)`` at the first crossing, interpolating
        linearly between sweep points
    """
    values, rates_t = result.retrieve(metric_t, curve)[:2]
    _, rates_r = result.retrieve(metric_r, curve)[:2]
    gap = rates_t - rates_r
    exact = np.flatnonzero(gap == 0)
    changes = np.flatnonzero(np.sign(gap[:-1]) * np.sign(gap[1:]) < 0)
    if exact.size > 0 and (changes.size == 0 or exact[0] <= changes[0]):
        return float(values[exact[0]]), float(rates_t[exact[0]])
    if changes.size == 0:
        raise InvalidParameterException(
            curve, "The rates %s and %s of %s never cross" % (metric_t, metric_r, curve))
    first = changes[0]
    crossing = brentq(lambda v: np.interp(v, values, gap),
                      values[first], values[first + 1])
    return float(crossing), float(np.interp(crossing, values, rates_t))
