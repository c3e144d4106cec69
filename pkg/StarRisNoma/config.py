"""Reading of flat configuration files. Each non-empty line holds one
``key = value`` entry, and ``#`` starts a comment. Every key is optional; a
missing key keeps the default of the corresponding model field, so an empty file
describes the default system.

Quantities that are customarily given in decibels are read in decibels and
converted to linear units here, and nowhere else:

=================== ====================================== =================
key                 meaning                                default
=================== ====================================== =================
ap_pos, uet_pos,    positions ``x, y, z`` in meters        see SceneConfig
uer_pos, ris_pos
n_t_x, n_t_y,       elements of each panel per dimension   20
n_r_x, n_r_y
wavelength_m        carrier wavelength in meters           0.1
spacing_over_lambda element spacing in wavelengths         0.5
kappa_t_db, ...     Rician factors in dB                   0 dB
alpha_t, ...        path-loss exponents                    2.542, 2.542, 2.4
rho0_db             path loss at 1 m in dB                 -30
noise_dbm           thermal noise power in dBm             -100
eps_v, eps_ut,      hardware qualities in [0, 1]           1
eps_ur
phase_noise_kind    none, vonmises or uniform              none
phase_noise_power   phase-noise variance in rad^2          0
aoa_t_deg, ...      explicit ``elevation, azimuth`` in     from positions
                    degrees of one panel link
pilot_len_K         pilot length                           50
=================== ====================================== =================

The hardware qualities may also be spelled ``epsilon_v``, ``epsilon_ut`` and
``epsilon_ur``.

A file may also describe a single sweep with the keys ``sweep_axis``,
``sweep_values``, ``trials``, ``seed``, ``estimator``, ``phase_design``,
``sic``, ``snr_db``, ``snr_offset_r_db``, ``label``, ``eta``, ``beta`` (a
number, or ``optimal`` to pick the decoding order per realization) and
``fraction_B``. Those keys are only read by :func:`load_sweep`.

Every problem is reported as a
:class:`StarRisNoma.error_handling.ConfigException` naming the key and line.
"""

import logging
import math

from pydantic import ValidationError

from .error_handling import ConfigException
from .estimation import PilotConfig
from .experiments import SweepSpec
from .geometry_channel import DEFAULT_WAVELENGTH, SceneConfig
from .noise_sampling import PhaseNoiseModel
from .utils import db_to_linear, dbm_to_watts

__all__ = ["read_entries", "load_config", "load_sweep", "SCENE_KEYS",
           "SWEEP_KEYS"]

logger = logging.getLogger(__name__)


def _text(value):
    return value


def _number(value):
    return float(value)


def _integer(value):
    number = float(value)
    if number != int(number):
        raise ValueError("expected an integer, got %r" % value)
    return int(number)


def _numbers(count):
    def parse(value):
        parts = [part.strip() for part in value.split(",")]
        if len(parts) != count:
            raise ValueError("expected %i comma-separated numbers" % count)
        return tuple(float(part) for part in parts)
    return parse


def _number_list(value):
    return tuple(float(part) for part in value.split(",") if part.strip())


def _decibels(value):
    return float(db_to_linear(float(value)))


def _dbm(value):
    return float(dbm_to_watts(float(value)))


def _degrees(value):
    return tuple(math.radians(angle) for angle in _numbers(2)(value))


def _optional_number(value):
    if value.lower() in ("optimal", "none"):
        return None
    return float(value)


# key -> (model field, parser)
SCENE_KEYS = {
    "ap_pos": ("ap_pos", _numbers(3)),
    "uet_pos": ("uet_pos", _numbers(3)),
    "uer_pos": ("uer_pos", _numbers(3)),
    "ris_pos": ("ris_pos", _numbers(3)),
    "n_t_x": ("n_t_x", _integer),
    "n_t_y": ("n_t_y", _integer),
    "n_r_x": ("n_r_x", _integer),
    "n_r_y": ("n_r_y", _integer),
    "wavelength_m": ("wavelength", _number),
    "spacing_over_lambda": ("spacing_over_lambda", _number),
    "kappa_t_db": ("kappa_t", _decibels),
    "kappa_r_db": ("kappa_r", _decibels),
    "kappa_a_db": ("kappa_a", _decibels),
    "alpha_t": ("alpha_t", _number),
    "alpha_r": ("alpha_r", _number),
    "alpha_a": ("alpha_a", _number),
    "rho0_db": ("rho0", _decibels),
    "noise_dbm": ("noise_power", _dbm),
    "eps_v": ("eps_v", _number),
    "eps_ut": ("eps_ut", _number),
    "eps_ur": ("eps_ur", _number),
    "epsilon_v": ("eps_v", _number),
    "epsilon_ut": ("eps_ut", _number),
    "epsilon_ur": ("eps_ur", _number),
    "phase_noise_kind": ("kind", _text),
    "phase_noise_power": ("power", _number),
    "aoa_t_deg": ("aoa_t", _degrees),
    "aoa_r_deg": ("aoa_r", _degrees),
    "aod_t_deg": ("aod_t", _degrees),
    "aod_r_deg": ("aod_r", _degrees),
    "pilot_len_K": ("K", _integer),
}

SWEEP_KEYS = {
    "sweep_axis": ("axis", _text),
    "sweep_values": ("axis_values", _number_list),
    "trials": ("trials", _integer),
    "seed": ("seed", _integer),
    "estimator": ("estimator", _text),
    "phase_design": ("phase_design", _text),
    "sic": ("sic", _text),
    "snr_db": ("snr_db", _number),
    "snr_offset_r_db": ("snr_offset_r_db", _number),
    "label": ("label", _text),
    "eta": ("eta", _number),
    "beta": ("beta", _optional_number),
    "fraction_B": ("fraction_b", _number),
}

PHASE_NOISE_FIELDS = ("kind", "power")
PILOT_FIELDS = ("K",)


def read_entries(path):
    """Reads the raw entries of a configuration file

    :param path: path of the file
    :returns: a dict of ``{key: (value, line_number)}`` in file order
    """
    entries = dict()
    with open(path, "r") as handle:
        for line_number, line in enumerate(handle, start=1):
            content = line.split("#", 1)[0].strip()
            if len(content) == 0:
                continue
            if "=" not in content:
                raise ConfigException(content, line_number,
                                      "expected a 'key = value' entry")
            key, value = (part.strip() for part in content.split("=", 1))
            if key not in SCENE_KEYS and key not in SWEEP_KEYS:
                raise ConfigException(key, line_number, "unknown key")
            if key in entries:
                raise ConfigException(key, line_number, "duplicate key (first on line %i)"
                                      % entries[key][1])
            if len(value) == 0:
                raise ConfigException(key, line_number, "missing value")
            entries[key] = (value, line_number)
    return entries


def _parse(entries, keys):
    """Converts the entries of the given keys into model fields

    :returns: ``(fields, origin)`` where ``origin`` maps each field back to its
        key and line
    """
    fields = dict()
    origin = dict()
    for key, (value, line_number) in entries.items():
        if key not in keys:
            continue
        field, parser = keys[key]
        if field in origin:
            raise ConfigException(key, line_number, "sets the same quantity as %r (line %i)"
                                  % origin[field])
        try:
            fields[field] = parser(value)
        except (ValueError, OverflowError) as error:
            raise ConfigException(key, line_number, "malformed value %r: %s" % (value, error))
        origin[field] = (key, line_number)
    return fields, origin


def _build(model, fields, origin, fallback_fields=()):
    """Builds a pydantic model, reporting the first validation error against
    the key it came from. Errors of the model as a whole are reported against
    the first of ``fallback_fields`` present in the file"""
    try:
        return model(**fields)
    except ValidationError as error:
        detail = error.errors()[0]
        field = detail["loc"][0] if detail["loc"] else None
        candidates = [field] + [name for name in fallback_fields if name in origin]
        key, line_number = next((origin[name] for name in candidates if name in origin),
                                (field, None))
        raise ConfigException(key, line_number, detail["msg"])


def _scene_and_pilots(entries):
    fields, origin = _parse(entries, SCENE_KEYS)

    noise_fields = dict((field, fields.pop(field)) for field in PHASE_NOISE_FIELDS
                        if field in fields)
    phase_noise = _build(PhaseNoiseModel, noise_fields, origin, PHASE_NOISE_FIELDS)

    pilot_fields = dict((field, fields.pop(field)) for field in PILOT_FIELDS
                        if field in fields)
    pilots = _build(PilotConfig, pilot_fields, origin)

    ratio = fields.pop("spacing_over_lambda", 0.5)
    if not ratio > 0:
        key, line_number = origin["spacing_over_lambda"]
        raise ConfigException(key, line_number, "element spacing must be positive")
    wavelength = fields.get("wavelength", DEFAULT_WAVELENGTH)
    if wavelength > 0:
        fields["spacing_x"] = fields["spacing_y"] = ratio * wavelength
        for name in ("spacing_over_lambda", "wavelength"):
            if name in origin:
                origin["spacing_x"] = origin["spacing_y"] = origin[name]
                break
    scene = _build(SceneConfig, dict(fields, phase_noise=phase_noise), origin)
    return scene, pilots


def load_config(path):
    """Loads the system described by a configuration file

    :param path: path of the file
    :returns: ``(scene, pilots)``, a
        :class:`StarRisNoma.geometry_channel.SceneConfig` and a
        :class:`StarRisNoma.estimation.PilotConfig`
    """
    entries = read_entries(path)
    scene, pilots = _scene_and_pilots(entries)
    ignored = [key for key in entries if key in SWEEP_KEYS]
    if len(ignored) > 0 and "sweep_axis" not in entries:
        logger.warning("%s: sweep keys %s have no effect without sweep_axis",
                       path, ", ".join(ignored))
    logger.debug("Loaded %i entries from %s", len(entries), path)
    return scene, pilots


def load_sweep(path):
    """Loads the inline sweep of a configuration file, if it has one

    :param path: path of the file
    :returns: a :class:`StarRisNoma.experiments.SweepSpec`, or None when the
        file has no ``sweep_axis`` entry
    """
    entries = read_entries(path)
    if "sweep_axis" not in entries:
        return None
    if "sweep_values" not in entries:
        raise ConfigException("sweep_values", None, "a sweep needs its axis values")
    scene, pilots = _scene_and_pilots(entries)
    fields, origin = _parse(entries, SWEEP_KEYS)
    return _build(SweepSpec, dict(fields, scene=scene, pilots=pilots), origin)
