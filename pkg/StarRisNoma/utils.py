"""Various and sundry useful functions for converting units and shaping
arrays of RIS elements"""

import numpy as np

from .error_handling import InvalidParameterException

__all__ = ["db_to_linear", "linear_to_db", "dbm_to_watts", "watts_to_dbm",
           "panel_shape"]


def db_to_linear(value_db):
    """Converts a power ratio in dB to linear scale"""
    return 10.0 ** (np.asarray(value_db, dtype=float) / 10.0)


def linear_to_db(value):
    """Converts a linear power ratio to dB

    :param value: strictly positive power ratio
    :returns: ratio in dB
    """
    value = np.asarray(value, dtype=float)
    if np.any(value <= 0):
        raise InvalidParameterException(
            value, "Only strictly positive ratios can be expressed in dB")
    return 10.0 * np.log10(value)


def dbm_to_watts(value_dbm):
    """Converts a power in dBm to watts"""
    return db_to_linear(value_dbm) * 1e-3


def watts_to_dbm(value):
    """Converts a power in watts to dBm"""
    return linear_to_db(np.asarray(value, dtype=float) * 1e3)


def panel_shape(num_elements):
    """Splits a number of RIS elements into a ``(N_x, N_y)`` grid, where N_x is
    the largest divisor of ``num_elements`` not exceeding its square root. A
    perfect square is therefore split evenly (400 -> 20 x 20)

    :param num_elements: positive integer
    :returns: ``(n_x, n_y)`` with ``n_x * n_y == num_elements``
    """
    num_elements = int(num_elements)
    if num_elements < 1:
        raise InvalidParameterException(
            num_elements, "A panel must hold at least one element")
    n_x = int(np.floor(np.sqrt(num_elements)))
    while num_elements % n_x != 0:
        n_x -= 1
    return n_x, num_elements // n_x
