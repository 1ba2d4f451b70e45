"""Phase-insensitive Gaussian channels, their canonical forms and composition.

A channel is the pair ``(x, M)`` acting on first and second moments as

    m -> sqrt(x) m,     V -> x V + (2M + |1 - x|) I

Attenuators, additive-noise maps and amplifiers are the ``x < 1``, ``x = 1``
and ``x > 1`` slices of the same plane.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import DomainError

__all__ = [
    "Channel",
    "Attenuator",
    "AdditiveNoise",
    "Amplifier",
    "CanonicalForm",
    "GaussianMoments",
    "IDENTITY",
    "make_channel",
    "to_canonical",
    "compose",
    "compose_canonical",
    "composition_rule",
    "apply_to_moments",
    "oracle_compose",
    "heaviside",
]


def heaviside(t: float) -> float:
    """Step function with the convention ``heaviside(0) == 1``."""
    return 1.0 if t >= 0 else 0.0


def _check_finite_nonneg(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise DomainError(f"{name} must be finite, got {value!r}")
    if value < 0:
        raise DomainError(f"{name} must be non-negative, got {value!r}")
    return value


@dataclass(frozen=True)
class Channel:
    """Point ``(x, M)`` of the non-negative quadrant."""

    x: float
    M: float

    def __post_init__(self):
        object.__setattr__(self, "x", _check_finite_nonneg("x", self.x))
        object.__setattr__(self, "M", _check_finite_nonneg("M", self.M))

    @property
    def kind(self) -> str:
        if self.x < 1:
            return "attenuator"
        if self.x > 1:
            return "amplifier"
        return "additive"

    def as_dict(self) -> dict:
        return {"x": self.x, "M": self.M}


IDENTITY = Channel(1.0, 0.0)


def make_channel(x: float, M: float) -> Channel:
    return Channel(x, M)


@dataclass(frozen=True)
class Attenuator:
    """Thermal attenuator with transmissivity ``eta`` and bath occupation ``N``."""

    eta: float
    N: float

    def __post_init__(self):
        eta = _check_finite_nonneg("eta", self.eta)
        if eta > 1:
            raise DomainError(f"attenuator transmissivity must be <= 1, got {eta!r}")
        object.__setattr__(self, "eta", eta)
        object.__setattr__(self, "N", _check_finite_nonneg("N", self.N))

    def to_channel(self) -> Channel:
        return Channel(self.eta, (1.0 - self.eta) * self.N)


@dataclass(frozen=True)
class AdditiveNoise:
    """Classical additive Gaussian noise of variance ``N``."""

    N: float

    def __post_init__(self):
        object.__setattr__(self, "N", _check_finite_nonneg("N", self.N))

    def to_channel(self) -> Channel:
        return Channel(1.0, self.N)


@dataclass(frozen=True)
class Amplifier:
    """Thermal amplifier with gain ``g`` and bath occupation ``N``."""

    g: float
    N: float

    def __post_init__(self):
        g = float(self.g)
        if not math.isfinite(g) or g < 1:
            raise DomainError(f"amplifier gain must be finite and >= 1, got {g!r}")
        object.__setattr__(self, "g", g)
        object.__setattr__(self, "N", _check_finite_nonneg("N", self.N))

    def to_channel(self) -> Channel:
        return Channel(self.g, (self.g - 1.0) * self.N)


CanonicalForm = Union[Attenuator, AdditiveNoise, Amplifier]


def to_canonical(c: Channel) -> CanonicalForm:
    """Attenuator / additive-noise / amplifier view of ``c`` (``x == 1`` maps to additive noise)."""
    if c.x < 1:
        return Attenuator(c.x, c.M / (1.0 - c.x))
    if c.x > 1:
        return Amplifier(c.x, c.M / (c.x - 1.0))
    return AdditiveNoise(c.M)


def compose(inner: Channel, outer: Channel) -> Channel:
    """Channel obtained by applying ``inner`` first and then ``outer``."""
    x1, m1 = inner.x, inner.M
    x2, m2 = outer.x, outer.M
    x3 = x2 * x1
    m3 = m2 + x2 * m1 + 0.5 * (abs(x2 - 1.0) + x2 * abs(x1 - 1.0) - abs(x3 - 1.0))
    # the bracket is >= 0 by the triangle inequality; clip roundoff only
    return Channel(x3, max(m3, 0.0))


def _noise_coefficient(form: CanonicalForm) -> float:
    """Additive coefficient ``2M + |1 - x|`` written in the form's own variables."""
    if isinstance(form, Attenuator):
        return (1.0 - form.eta) * (2.0 * form.N + 1.0)
    if isinstance(form, Amplifier):
        return (form.g - 1.0) * (2.0 * form.N + 1.0)
    return 2.0 * form.N


def _gain(form: CanonicalForm) -> float:
    if isinstance(form, Attenuator):
        return form.eta
    if isinstance(form, Amplifier):
        return form.g
    return 1.0


def composition_rule(inner: CanonicalForm, outer: CanonicalForm) -> str:
    """Label of the composition rule used for the pair (``C0`` when additive noise is involved)."""
    x3 = _gain(inner) * _gain(outer)
    sub = "1" if x3 < 1 else "2"
    if isinstance(inner, Attenuator) and isinstance(outer, Attenuator):
        return "C1"
    if isinstance(inner, Amplifier) and isinstance(outer, Amplifier):
        return "C2"
    if isinstance(inner, Amplifier) and isinstance(outer, Attenuator):
        return "C3." + sub
    if isinstance(inner, Attenuator) and isinstance(outer, Amplifier):
        return "C4." + sub
    return "C0"


def compose_canonical(inner: CanonicalForm, outer: CanonicalForm) -> CanonicalForm:
    """Compose two canonical forms with the attenuator/amplifier composition rules.

    ``C1`` and ``C2`` give the output noise ``(1 - eta3) N3`` / ``(g3 - 1) N3``
    directly. The mixed rules ``C3``/``C4`` fix the combination
    ``|1 - x3| (2 N3 + 1)``, which is the additive coefficient
    ``2 M3 + |1 - x3|``; at ``x3 == 1`` both sub-branches reduce to additive
    noise with ``N3 = M3``.
    """
    rule = composition_rule(inner, outer)
    x3 = _gain(inner) * _gain(outer)
    if rule == "C1":
        eta1, n1, eta2, n2 = inner.eta, inner.N, outer.eta, outer.N
        m3 = (1.0 - eta2) * n2 + (1.0 - eta1) * eta2 * n1
    elif rule == "C2":
        g1, n1, g2, n2 = inner.g, inner.N, outer.g, outer.N
        m3 = (g2 - 1.0) * n2 + (g1 - 1.0) * g2 * n1
    elif rule.startswith("C3"):
        g1, n1, eta2, n2 = inner.g, inner.N, outer.eta, outer.N
        c3 = (1.0 - eta2) * (2.0 * n2 + 1.0) + (x3 - eta2) * (2.0 * n1 + 1.0)
        m3 = 0.5 * (c3 - abs(1.0 - x3))
    elif rule.startswith("C4"):
        eta1, n1, g2, n2 = inner.eta, inner.N, outer.g, outer.N
        c3 = (g2 - 1.0) * (2.0 * n2 + 1.0) + (g2 - x3) * (2.0 * n1 + 1.0)
        m3 = 0.5 * (c3 - abs(1.0 - x3))
    else:
        c3 = _gain(outer) * _noise_coefficient(inner) + _noise_coefficient(outer)
        m3 = 0.5 * (c3 - abs(1.0 - x3))
    return to_canonical(Channel(x3, max(m3, 0.0)))


@dataclass(frozen=True)
class GaussianMoments:
    """First moments ``mean`` (2-vector) and covariance ``cov`` (2x2) of a single-mode state."""

    mean: np.ndarray
    cov: np.ndarray

    def __post_init__(self):
        mean = np.asarray(self.mean, dtype=float).reshape(2)
        cov = np.asarray(self.cov, dtype=float).reshape(2, 2)
        if not np.allclose(cov, cov.T, rtol=0, atol=1e-12):
            raise DomainError("second-moment matrix must be symmetric")
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "cov", cov)


def apply_to_moments(c: Channel, s: GaussianMoments) -> GaussianMoments:
    mean = math.sqrt(c.x) * s.mean
    cov = c.x * s.cov + (2.0 * c.M + abs(1.0 - c.x)) * np.eye(2)
    return GaussianMoments(mean, cov)


def oracle_compose(inner: Channel, outer: Channel) -> Channel:
    """Recover the composite channel from its affine action on second moments.

    Independent of :func:`compose`: the two channels are applied to the
    covariance matrices ``0`` and ``I`` and the gain and additive coefficient
    are read off the outputs.
    """
    zero = GaussianMoments(np.zeros(2), np.zeros((2, 2)))
    unit = GaussianMoments(np.zeros(2), np.eye(2))
    c3 = apply_to_moments(outer, apply_to_moments(inner, zero)).cov[0, 0]
    x3 = apply_to_moments(outer, apply_to_moments(inner, unit)).cov[0, 0] - c3
    x3 = max(x3, 0.0)
    return Channel(x3, max(0.5 * (c3 - abs(1.0 - x3)), 0.0))
