"""Every stochastic quantity in the simulator is drawn through this module. It
provides the two phase-noise laws which perturb the STAR-RIS elements, the
circularly symmetric complex Gaussian (CSCG) sampler used for the diffuse part
of every Rician channel and for all of the hardware-impairment and thermal noise
terms, and the special functions needed to evaluate the mean of the phase noise
exponential in closed form.

Randomness is organized into ``RngStream`` objects. A stream is identified by a
``(seed, stream_id)`` pair and always produces the same sequence of draws, so
that Monte Carlo trials can be regenerated individually and farmed out to
worker processes without changing any result. Internally each stream is a
Philox counter-based generator keyed through ``numpy.random.SeedSequence``.

The phase noise ``theta~`` on each element is zero-mean and i.i.d. and follows
one of

- a von Mises law with concentration ``1 / sigma_p^2``, sampled exactly with the
  Best-Fisher wrapped-rejection scheme, or
- a uniform law on ``(-iota_p, iota_p)`` with ``iota_p = sqrt(3 sigma_p^2)``.

The closed-form analysis needs ``xi = E[exp(j theta~)]``, which is
``I1(kappa) / I0(kappa)`` for the von Mises law and ``sin(iota_p) / iota_p``
for the uniform law.
"""

import math

import numpy as np
from pydantic import BaseModel, Field, model_validator

from .error_handling import InvalidParameterException

__all__ = ["PhaseNoiseModel", "RngStream", "bessel_i_ratio", "xi_factor",
           "sample_phase_noise", "sample_cscg", "as_generator"]

PHASE_NOISE_KINDS = ("none", "vonmises", "uniform")

# Above this argument the large-argument expansion is used for the Bessel ratio
_BESSEL_SERIES_LIMIT = 30.0
_SERIES_TOLERANCE = 1e-16
_MAX_SERIES_TERMS = 500


class PhaseNoiseModel(BaseModel):
    """Distribution of the residual phase error on each RIS element

    ``kind`` is one of ``"none"``, ``"vonmises"`` or ``"uniform"`` and ``power``
    is the phase-noise variance in radians squared. A zero power is the
    noiseless model whatever the requested kind.
    """

    kind: str = "none"
    power: float = Field(default=0.0, ge=0.0)

    model_config = {"frozen": True}

    @model_validator(mode="before")
    @classmethod
    def _normalize_kind(cls, data):
        if isinstance(data, dict):
            data = dict(data)
            kind = str(data.get("kind", "none")).lower()
            power = data.get("power", 0.0)
            if kind not in PHASE_NOISE_KINDS:
                raise ValueError("phase noise kind must be one of %s, not %r" %
                                 (", ".join(PHASE_NOISE_KINDS), kind))
            if kind == "none" and power not in (None, 0, 0.0):
                raise ValueError(
                    "a phase noise model of kind 'none' must have zero power")
            if power in (None, 0, 0.0):
                kind = "none"
                power = 0.0
            data["kind"] = kind
            data["power"] = power
        return data

    @property
    def is_null(self):
        """Whether sampled noise is identically zero"""
        return self.kind == "none"

    @property
    def concentration(self):
        """Von Mises concentration ``1 / sigma_p^2`` (infinite when noiseless)"""
        if self.is_null:
            return math.inf
        return 1.0 / self.power

    @property
    def half_width(self):
        """Half-width ``sqrt(3 sigma_p^2)`` of the uniform law"""
        return math.sqrt(3.0 * self.power)


class RngStream(BaseModel):
    """A reproducible, independent source of random draws"""

    seed: int = Field(ge=0, lt=2 ** 64)
    stream_id: int = Field(default=0, ge=0, lt=2 ** 64)

    model_config = {"frozen": True}

    def generator(self):
        """Builds a fresh ``numpy.random.Generator`` positioned at the start of
        this stream"""
        seed_seq = np.random.SeedSequence(
            self.seed, spawn_key=(self.stream_id,))
        return np.random.Generator(np.random.Philox(seed_seq))

    def substream(self, stream_id):
        """Returns the stream with the same seed and another identifier"""
        return RngStream(seed=self.seed, stream_id=stream_id)


def as_generator(rng):
    """Accepts an ``RngStream`` or a ``numpy.random.Generator`` and returns a
    generator to draw from"""
    if isinstance(rng, RngStream):
        return rng.generator()
    if isinstance(rng, np.random.Generator):
        return rng
    raise InvalidParameterException(
        rng, "Random source must be an RngStream or a numpy Generator")


def _bessel_i_series(x, order):
    """Power series of the modified Bessel function of the first kind,
    ``sum_m (x/2)^(2m+order) / (m! Gamma(m+order+1))``"""
    half = 0.5 * x
    term = half ** order / math.gamma(order + 1)
    total = term
    quarter_sq = half * half
    for m in range(1, _MAX_SERIES_TERMS):
        term *= quarter_sq / (m * (m + order))
        total += term
        if term < _SERIES_TOLERANCE * total:
            break
    return total


def _bessel_i_scaled_asymptotic(x, order):
    """Large-argument expansion of ``I_order(x) * sqrt(2 pi x) * exp(-x)``"""
    mu = 4.0 * order * order
    term = 1.0
    total = 1.0
    for k in range(1, _MAX_SERIES_TERMS):
        new_term = -term * (mu - (2 * k - 1) ** 2) / (k * 8.0 * x)
        if abs(new_term) >= abs(term):
            # the series is asymptotic; stop at its smallest term
            break
        term = new_term
        total += term
        if abs(term) < _SERIES_TOLERANCE * abs(total):
            break
    return total


def bessel_i_ratio(kappa):
    """Computes ``I1(kappa) / I0(kappa)``, the mean resultant length of a von
    Mises law with concentration ``kappa``

    :param kappa: finite, strictly positive concentration
    :returns: a float in ``(0, 1)``
    """
    try:
        kappa = float(kappa)
    except (TypeError, ValueError):
        raise InvalidParameterException(
            kappa, "Bessel argument must be a real number")
    if not math.isfinite(kappa) or kappa <= 0:
        raise InvalidParameterException(
            kappa, "Bessel argument must be finite and strictly positive, got %r" % kappa)

    if kappa <= _BESSEL_SERIES_LIMIT:
        return _bessel_i_series(kappa, 1) / _bessel_i_series(kappa, 0)
    return (_bessel_i_scaled_asymptotic(kappa, 1) /
            _bessel_i_scaled_asymptotic(kappa, 0))


def xi_factor(model):
    """Mean of ``exp(j theta~)`` for a phase-noise model

    :param model: a :class:`PhaseNoiseModel`
    :returns: a float in ``(0, 1]``; 1 for the noiseless model
    """
    if model.is_null:
        return 1.0
    if model.kind == "vonmises":
        return bessel_i_ratio(model.concentration)
    iota = model.half_width
    if iota == 0.0:
        return 1.0
    return math.sin(iota) / iota


def _sample_von_mises(concentration, size, rng):
    """Best-Fisher rejection sampler for a zero-mean von Mises law. Returns
    samples on ``[-pi, pi]``"""
    if concentration < 1e-5:
        proposal_r = 1.0 / concentration + concentration
    else:
        tau = 1.0 + math.sqrt(1.0 + 4.0 * concentration ** 2)
        rho = (tau - math.sqrt(2.0 * tau)) / (2.0 * concentration)
        proposal_r = (1.0 + rho ** 2) / (2.0 * rho)

    total = int(np.prod(size))
    samples = np.empty(total)
    pending = np.arange(total)
    while pending.size > 0:
        u1 = rng.random(pending.size)
        u2 = rng.random(pending.size)
        u3 = rng.random(pending.size)
        z = np.cos(np.pi * u1)
        f = (1.0 + proposal_r * z) / (proposal_r + z)
        c = concentration * (proposal_r - f)
        with np.errstate(divide="ignore", invalid="ignore"):
            accept = (c * (2.0 - c) - u2 > 0) | (np.log(c / u2) + 1.0 - c >= 0)
        chosen = pending[accept]
        samples[chosen] = np.sign(u3[accept] - 0.5) * \
            np.arccos(np.clip(f[accept], -1.0, 1.0))
        pending = pending[~accept]
    return samples.reshape(size)


def sample_phase_noise(model, n, rng):
    """Draws i.i.d. phase errors

    :param model: a :class:`PhaseNoiseModel`
    :param n: number of samples, or a shape tuple
    :param rng: an :class:`RngStream` or ``numpy.random.Generator``
    :returns: a float array of phases in radians
    """
    size = (int(n),) if np.isscalar(n) else tuple(int(s) for s in n)
    if any(s < 0 for s in size) or (np.isscalar(n) and int(n) < 1):
        raise InvalidParameterException(
            n, "Need a positive number of phase noise samples")
    rng = as_generator(rng)

    if model.is_null:
        return np.zeros(size)
    if model.kind == "uniform":
        iota = model.half_width
        return rng.uniform(-iota, iota, size=size)
    return _sample_von_mises(model.concentration, size, rng)


def sample_cscg(mean, variance, n, rng):
    """Draws circularly symmetric complex Gaussians ``CN(mean, variance)``.
    Every entry is ``mean + sqrt(variance / 2) * (g1 + j g2)`` for independent
    standard normals ``g1`` and ``g2``

    :param mean: complex scalar or array, broadcast against ``n``
    :param variance: total (real plus imaginary) variance, non-negative
    :param n: number of samples, or a shape tuple
    :param rng: an :class:`RngStream` or ``numpy.random.Generator``
    :returns: a complex array
    """
    if not np.isfinite(variance) or variance < 0:
        raise InvalidParameterException(
            variance, "Variance must be a non-negative real, got %r" % (variance,))
    size = (int(n),) if np.isscalar(n) else tuple(int(s) for s in n)
    mean = np.broadcast_to(np.asarray(mean, dtype=complex), size)
    if variance == 0:
        return mean.copy()

    rng = as_generator(rng)
    scale = math.sqrt(variance / 2.0)
    return mean + scale * (rng.standard_normal(size) +
                           1j * rng.standard_normal(size))
