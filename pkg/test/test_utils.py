import numpy as np
import pytest

from StarRisNoma.error_handling import InvalidParameterException
from StarRisNoma.utils import db_to_linear, dbm_to_watts, linear_to_db, panel_shape, watts_to_dbm


def test_db_to_linear():
    assert db_to_linear(0) == 1.0
    assert np.isclose(db_to_linear(3), 10 ** 0.3)
    assert np.allclose(db_to_linear([10, 20, -10]), [10, 100, 0.1])


def test_linear_to_db():
    assert np.isclose(linear_to_db(1000), 30)
    assert np.allclose(linear_to_db(db_to_linear([-7.5, 0, 12.25])), [-7.5, 0, 12.25])
    with pytest.raises(InvalidParameterException):
        linear_to_db(0)
    with pytest.raises(InvalidParameterException):
        linear_to_db([1, -1])


def test_dbm_conversion():
    assert np.isclose(dbm_to_watts(-100), 1e-13)
    assert np.isclose(dbm_to_watts(30), 1.0)
    assert np.isclose(watts_to_dbm(1e-3), 0.0)


def test_panel_shape():
    assert panel_shape(400) == (20, 20)
    assert panel_shape(800) == (25, 32)
    assert panel_shape(1) == (1, 1)
    assert panel_shape(7) == (1, 7)
    assert panel_shape(12) == (3, 4)
    for n in range(1, 200):
        n_x, n_y = panel_shape(n)
        assert n_x * n_y == n
        assert n_x <= n_y
    with pytest.raises(InvalidParameterException):
        panel_shape(0)
