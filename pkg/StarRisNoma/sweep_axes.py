"""Every sweep varies exactly one quantity while the rest of the system stays
as given by its ``SweepSpec``. The ``SweepAxis`` turns the sweep into a sequence
of ``SweepPoint`` objects, one per axis value, each carrying the complete
setting of one point: the scene, the pilot length, the per-user SNR targets and
the SIC, time-sharing and OMA parameters.

``SweepAxis`` provides the shared machinery: it stores the sweep, builds the
baseline point and lazily iterates over the axis values. Each subclass only
states how its axis value changes the baseline. If a new kind of sweep is
needed, extend ``SweepAxis`` in the same way and register the class in
``VALID_SWEEP_AXES``.

-----
"""

from .error_handling import InvalidSweepException
from .utils import panel_shape

__all__ = ["SweepPoint", "SweepAxis", "SnrAxis", "ElementCountAxis",
           "PilotLengthAxis", "FractionAxis", "SicImperfectionAxis",
           "VALID_SWEEP_AXES", "verify_sweep_axis"]


class SweepPoint(object):
    """Complete setting of one point of a sweep"""

    def __init__(self, index, value, scene, K, snr_t_db, snr_r_db, eta, beta,
                 fraction_b):
        self.index = index
        self.value = value
        self.scene = scene
        self.K = K
        self.snr_t_db = snr_t_db
        self.snr_r_db = snr_r_db
        self.eta = eta
        self.beta = beta
        self.fraction_b = fraction_b

    def updated(self, **changes):
        values = dict(self.__dict__)
        values.update(changes)
        return SweepPoint(**values)

    def __repr__(self):
        return "SweepPoint(%i, value=%g)" % (self.index, self.value)


class SweepAxis(object):
    """The base ``SweepAxis`` stores the sweep and iterates over its axis values,
    applying ``configure`` to the baseline point for each of them"""

    name = "Abstract Sweep Axis"

    def __init__(self, spec):
        """:param spec: a :class:`StarRisNoma.experiments.SweepSpec`"""
        self.spec = spec

    def baseline(self, index, value):
        spec = self.spec
        return SweepPoint(index, value, spec.scene, spec.pilots.K, spec.snr_db,
                          spec.snr_db + spec.snr_offset_r_db, spec.eta,
                          spec.beta, spec.fraction_b)

    def configure(self, point, value):
        """Returns the point with the swept quantity set to ``value``"""
        raise NotImplementedError(
            "Please implement how the axis value changes a point on class %s" % self.name)

    def generate_all_points(self):
        """Yields one :class:`SweepPoint` per axis value"""
        for index, value in enumerate(self.spec.axis_values):
            yield self.configure(self.baseline(index, value), value)

    def __iter__(self):
        return self.generate_all_points()

    def __len__(self):
        return len(self.spec.axis_values)


class SnrAxis(SweepAxis):
    """Sweeps the average received SNR of UE-T in dB. UE-R keeps the offset
    ``snr_offset_r_db`` from it"""

    name = "snr_db"

    def configure(self, point, value):
        return point.updated(snr_t_db=value,
                             snr_r_db=value + self.spec.snr_offset_r_db)


class ElementCountAxis(SweepAxis):
    """Sweeps the number of elements of each panel. Both panels are reshaped
    to the most square grid holding exactly that many elements"""

    name = "n_elements"

    def configure(self, point, value):
        n_x, n_y = panel_shape(int(value))
        scene = point.scene.replace(n_t_x=n_x, n_t_y=n_y, n_r_x=n_x, n_r_y=n_y)
        return point.updated(scene=scene)


class PilotLengthAxis(SweepAxis):
    """Sweeps the pilot length K"""

    name = "pilot_len_K"

    def configure(self, point, value):
        return point.updated(K=int(value))


class FractionAxis(SweepAxis):
    """Sweeps the time-sharing fraction of NOMA and the resource fraction of
    OMA together, so the rate pairs of both access schemes can be compared on
    one axis"""

    name = "fraction_B_or_beta"

    def configure(self, point, value):
        return point.updated(beta=value, fraction_b=value)


class SicImperfectionAxis(SweepAxis):
    """Sweeps the residual fraction of imperfect SIC"""

    name = "eta"

    def configure(self, point, value):
        return point.updated(eta=value)


VALID_SWEEP_AXES = dict((axis.name, axis) for axis in (
    SnrAxis, ElementCountAxis, PilotLengthAxis, FractionAxis, SicImperfectionAxis))


def verify_sweep_axis(axis):
    """Looks up the ``SweepAxis`` class of an axis name

    :param axis: one of the keys of ``VALID_SWEEP_AXES``
    :returns: the matching subclass of :class:`SweepAxis`
    """
    if axis in VALID_SWEEP_AXES:
        return VALID_SWEEP_AXES[axis]
    raise InvalidSweepException(
        "axis", "%s is not a sweep axis. Valid options are\n%r" %
        (axis, sorted(VALID_SWEEP_AXES.keys())))
