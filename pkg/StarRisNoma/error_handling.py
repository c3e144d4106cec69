"""There are a handful of different errors and warnings that the simulator can
report. This houses all of them and provides information regarding ways to fix
them."""


class InvalidParameterException(Exception):
    """Thrown when a numerical parameter lies outside of the domain on which a
    formula or sampler is defined"""

    def __init__(self, value, msg=None):
        if msg is None:
            msg = "Parameter value is outside of its valid domain: %r" % (value,)

        super(InvalidParameterException, self).__init__(msg)
        self.value = value


class GeometryException(Exception):
    """Thrown when the scene geometry is degenerate (e.g. a node sits on top
    of the RIS)"""

    def __init__(self, node, msg=None):
        if msg is None:
            msg = "%s is colocated with the RIS; angles and path loss are undefined" % node

        super(GeometryException, self).__init__(msg)
        self.node = node


class UnmatchedLengthObservationsException(Exception):
    """Thrown when the number of pilot observations doesn't match the length of
    the pilot sequence used for combining"""

    def __init__(self, observations, pilot, msg=None):
        if msg is None:
            msg = "Observations and pilot sequence have different lengths: %r and %r" % (
                observations.shape[-1], pilot.shape[-1])

        super(UnmatchedLengthObservationsException, self).__init__(msg)
        self.observations = observations
        self.pilot = pilot


class InvalidRecipeException(Exception):
    """Thrown when a named sweep recipe does not exist"""

    def __init__(self, recipe, msg=None, options=None):
        if msg is None:
            msg = "%s is not a known recipe. " % recipe
            if options is not None:
                msg += "Available recipes are\n%s" % ", ".join(sorted(options))

        super(InvalidRecipeException, self).__init__(msg)
        self.recipe = recipe
        self.options = options


class InvalidSweepException(Exception):
    """Thrown when the fields of a sweep description are inconsistent"""

    def __init__(self, field, msg=None):
        if msg is None:
            msg = "Invalid value for sweep field %s" % field

        super(InvalidSweepException, self).__init__(msg)
        self.field = field


class ConfigException(Exception):
    """Thrown when a configuration file contains an unknown key, a malformed
    value, or a value outside of its allowed range"""

    def __init__(self, key, line=None, msg=None):
        if msg is None:
            msg = "Invalid configuration entry"
        location = "key '%s'" % key
        if line is not None:
            location += " (line %i)" % line
        msg = "%s: %s" % (location, msg)

        super(ConfigException, self).__init__(msg)
        self.key = key
        self.line = line


class ClosedFormDiscrepancyWarning(Warning):
    """Thrown when a Monte Carlo series strays further from its closed-form
    overlay than its standard error can explain"""
    pass


class DuplicateResultWarning(Warning):
    """Thrown when a row for an existing curve, axis value and metric is added
    to a :class:`StarRisNoma.result.SweepResult`"""
    pass
