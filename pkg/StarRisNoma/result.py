"""The ``SweepResult`` keeps every number produced by a sweep or a recipe.
Each row is a ``SeriesResult``: one metric at one axis value of one curve, with
its Monte Carlo mean, standard error and, where the analysis provides one, its
closed-form counterpart. The container iterates and indexes over rows,
retrieves a single curve of a single metric as arrays, and converts everything
to a long-format pandas dataframe for CSV output and summaries.
"""

import warnings

import numpy as np
import pandas as pd

from .error_handling import DuplicateResultWarning, InvalidParameterException
from .metrics import relative_deviation

__all__ = ["SeriesResult", "SweepResult", "write_results", "read_results",
           "RESULT_COLUMNS", "FLOAT_COLUMNS"]

RESULT_COLUMNS = ["curve", "axis_name", "axis_value", "metric_name", "mc_mean",
                  "mc_stderr", "closed_form", "relative_deviation", "trials",
                  "seed"]
FLOAT_COLUMNS = ["axis_value", "mc_mean", "mc_stderr", "closed_form",
                 "relative_deviation"]


class SeriesResult(object):
    """One metric at one point of a sweep"""

    def __init__(self, curve, axis_name, axis_value, metric_name, mc_mean,
                 mc_stderr, closed_form=None, trials=0, seed=0):
        self.curve = curve
        self.axis_name = axis_name
        self.axis_value = float(axis_value)
        self.metric_name = metric_name
        self.mc_mean = float(mc_mean)
        self.mc_stderr = float(mc_stderr)
        self.closed_form = None if closed_form is None else float(closed_form)
        self.trials = int(trials)
        self.seed = int(seed)

    @property
    def relative_deviation(self):
        """Relative distance of the Monte Carlo mean from the closed form"""
        return relative_deviation(self.mc_mean, self.closed_form)

    def as_row(self):
        return [getattr(self, column) for column in RESULT_COLUMNS]

    def __repr__(self):
        return "SeriesResult(%s, %s=%g, %s: %g +- %g)" % (
            self.curve, self.axis_name, self.axis_value, self.metric_name,
            self.mc_mean, self.mc_stderr)


class SweepResult(object):
    """Houses all rows produced by one sweep or by all curves of a recipe"""

    def __init__(self, name):
        """:param name: name of the recipe or sweep which produced the rows"""
        self.name = name
        self.rows = list()

    def add_series(self, series):
        """Appends rows. Warns if a row for the same curve, axis value and
        metric is already present

        :param series: an iterable of :class:`SeriesResult`
        """
        existing = set((row.curve, row.axis_value, row.metric_name)
                       for row in self.rows)
        for row in series:
            key = (row.curve, row.axis_value, row.metric_name)
            if key in existing:
                warnings.warn("Duplicate result for %r; keeping both" % (key,),
                              DuplicateResultWarning)
            existing.add(key)
            self.rows.append(row)

    def extend(self, other):
        """Appends all rows of another :class:`SweepResult`"""
        self.add_series(other.rows)

    @property
    def curves(self):
        """Curve labels in order of first appearance"""
        return list(dict.fromkeys(row.curve for row in self.rows))

    @property
    def metrics(self):
        return list(dict.fromkeys(row.metric_name for row in self.rows))

    def retrieve(self, metric, curve=None):
        """Returns one curve of one metric as arrays

        :param metric: name of the metric
        :param curve: curve label. May be omitted when there is a single curve
        :returns: ``(axis_values, mc_means, mc_stderrs, closed_forms)`` with NaN
            wherever there is no closed form
        """
        if curve is None:
            if len(self.curves) != 1:
                raise InvalidParameterException(
                    curve, "Name one of the curves %r" % (self.curves,))
            curve = self.curves[0]
        rows = sorted((row for row in self.rows
                       if row.curve == curve and row.metric_name == metric),
                      key=lambda row: row.axis_value)
        if len(rows) == 0:
            raise InvalidParameterException(
                (curve, metric), "No results for metric %s of curve %s" % (metric, curve))
        values = np.array([row.axis_value for row in rows])
        means = np.array([row.mc_mean for row in rows])
        stderrs = np.array([row.mc_stderr for row in rows])
        closed = np.array([np.nan if row.closed_form is None else row.closed_form
                           for row in rows])
        return values, means, stderrs, closed

    def to_frame(self):
        """Converts the rows into a long-format dataframe with the columns of
        ``RESULT_COLUMNS``"""
        frame = pd.DataFrame([row.as_row() for row in self.rows],
                             columns=RESULT_COLUMNS)
        for column in FLOAT_COLUMNS:
            frame[column] = frame[column].astype(float)
        return frame

    def summary(self):
        """Largest relative deviation from the closed form for every curve and
        metric which has one

        :returns: a dataframe indexed by ``(curve, metric_name)``
        """
        frame = self.to_frame().dropna(subset=["relative_deviation"])
        return frame.groupby(["curve", "metric_name"], sort=False).agg(
            points=("axis_value", "size"),
            max_relative_deviation=("relative_deviation", "max"))

    def __iter__(self):
        """Iterates over the rows"""
        return iter(self.rows)

    def __getitem__(self, index):
        """Retrieves the ith row"""
        return self.rows[index]

    def __len__(self):
        """Returns the total number of rows"""
        return len(self.rows)


def write_results(result, path):
    """Writes the rows of a :class:`SweepResult` as CSV with 17 significant
    digits, so that every float survives the round trip exactly"""
    result.to_frame().to_csv(path, float_format="%.17g", index=False)


def read_results(path):
    """Reads a CSV written by :func:`write_results` back into the dataframe of
    :meth:`SweepResult.to_frame`. Whole numbers such as an axis value of 10 are
    written without a decimal point, so the float columns are typed explicitly
    """
    return pd.read_csv(path, dtype={column: float for column in FLOAT_COLUMNS},
                       float_precision="round_trip")
