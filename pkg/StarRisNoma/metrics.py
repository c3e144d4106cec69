"""Aggregation of Monte Carlo samples into the numbers reported for every sweep
point. Sums are evaluated with ``math.fsum``, which is exactly rounded, so a
mean does not depend on the order in which trial blocks came back from the
worker processes."""

import math

import numpy as np

__all__ = ["monte_carlo_mean", "monte_carlo_stderr", "summarize",
           "relative_deviation", "beyond_standard_errors"]


def monte_carlo_mean(samples):
    """Exactly rounded mean of a one-dimensional array of samples"""
    samples = np.ravel(samples).astype(float)
    return math.fsum(samples) / samples.size


def monte_carlo_stderr(samples, mean=None):
    """Standard error of the mean, ``std(samples, ddof=1) / sqrt(n)``. Not
    defined (NaN) for a single sample"""
    samples = np.ravel(samples).astype(float)
    if samples.size < 2:
        return math.nan
    if mean is None:
        mean = monte_carlo_mean(samples)
    variance = math.fsum((samples - mean) ** 2) / (samples.size - 1)
    return math.sqrt(variance / samples.size)


def summarize(samples):
    """:returns: ``(mean, stderr)`` of a set of samples"""
    mean = monte_carlo_mean(samples)
    return mean, monte_carlo_stderr(samples, mean)


def relative_deviation(mc_mean, closed_form):
    """``|mc_mean - closed_form| / |closed_form|``, or None when there is no
    (non-zero) closed form to compare against"""
    if closed_form is None or closed_form == 0 or not math.isfinite(closed_form):
        return None
    return abs(mc_mean - closed_form) / abs(closed_form)


def beyond_standard_errors(mc_mean, mc_stderr, closed_form, count=4):
    """Whether a Monte Carlo mean lies more than ``count`` standard errors from
    its closed form"""
    if closed_form is None or not math.isfinite(mc_stderr):
        return False
    return abs(mc_mean - closed_form) > count * mc_stderr
