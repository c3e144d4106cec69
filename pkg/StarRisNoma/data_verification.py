"""These utilities check that arrays and sweep definitions handed to the
simulator have the expected shape and range before any computation starts, so
that mistakes surface as a clear exception instead of a silently wrong curve"""

import numpy as np

from .error_handling import (InvalidSweepException,
                             UnmatchedLengthObservationsException)

__all__ = ["verify_observations", "verify_axis_values"]


def verify_observations(observations, pilot):
    """Asserts that the pilot axis of the observations matches the pilot

    :param observations: numpy array whose last axis is the pilot axis
    :param pilot: one-dimensional pilot sequence
    """
    if pilot.ndim != 1:
        raise UnmatchedLengthObservationsException(
            observations, pilot, "Pilot sequence must be one-dimensional")
    if observations.ndim == 0:
        raise UnmatchedLengthObservationsException(
            observations, pilot, "Observations need a pilot axis")
    if observations.shape[-1] != pilot.shape[0]:
        raise UnmatchedLengthObservationsException(observations, pilot)


def verify_axis_values(axis, values):
    """Verifies that a list of sweep values is usable for a given axis and
    coerces it to a tuple of floats

    :param axis: name of the swept quantity
    :param values: iterable of numbers
    :returns: tuple of floats
    """
    try:
        values = tuple(float(v) for v in values)
    except (TypeError, ValueError):
        raise InvalidSweepException(
            "axis_values", "Sweep values must be a list of numbers, got %r" % (values,))
    if len(values) == 0:
        raise InvalidSweepException(
            "axis_values", "Sweep needs at least one axis value")
    if not all(np.isfinite(values)):
        raise InvalidSweepException(
            "axis_values", "Sweep values must be finite")
    if any(b <= a for a, b in zip(values[:-1], values[1:])):
        raise InvalidSweepException(
            "axis_values", "Sweep values must be strictly increasing: %r" % (values,))

    if axis in ("n_elements", "pilot_len_K"):
        lowest = 1 if axis == "n_elements" else 2
        if any(v != int(v) or v < lowest for v in values):
            raise InvalidSweepException(
                "axis_values", "Values of %s must be integers of at least %i" % (axis, lowest))
    elif axis == "fraction_B_or_beta":
        if values[0] < 0 or values[-1] > 1:
            raise InvalidSweepException(
                "axis_values", "Time/frequency fractions must lie in [0, 1]")
    elif axis == "eta":
        if values[0] < 0 or values[-1] > 1:
            raise InvalidSweepException(
                "axis_values", "SIC imperfection coefficients must lie in [0, 1]")
    return values
