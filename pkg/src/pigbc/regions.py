"""Entanglement-breaking / anti-degradable classification and low/high-ground regions.

For a reference channel ``(x, M)`` that is not deep inside the EB set
(``M <= min(1, x)``) the low-ground region ``L`` is the set of points lying
above both border functions ``f1``, ``f2`` and the high-ground region ``H``
the set lying below both. Deep inside the EB set (``M > min(1, x)``) every
point is high-ground and the low-ground region is the strict EB set.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Optional

from .channel import IDENTITY, Channel, compose, heaviside
from .errors import DegenerateError, DomainError, NotInRegionError

__all__ = [
    "Regime",
    "RegionVerdict",
    "BorderCurve",
    "BorderFunctions",
    "Witness",
    "m_eb",
    "m_ad",
    "is_deep_eb",
    "is_degenerate_reference",
    "classify",
    "border_f1",
    "border_f2",
    "border_curve",
    "lower_border",
    "upper_border",
    "in_low_ground",
    "in_high_ground",
    "two_element_borders_att",
    "two_element_borders_amp",
    "border_line",
    "witness_low_ground",
    "reconstruct",
    "complementarity_check",
]

WITNESS_TOL = 1e-9
BORDER_ATOL = 1e-12  # absorbs roundoff of f1/f2 so that border points (the reference itself) are members


def m_eb(x: float) -> float:
    """EB threshold: the channel is entanglement breaking iff ``M >= min(1, x)``."""
    return min(1.0, x)


def m_ad(x: float) -> float:
    """AD threshold ``min(x - 1/2, 1/2)``, clamped at 0 so ``M >= m_ad(x)`` is the AD test for all x."""
    return max(0.0, min(x - 0.5, 0.5))


class Regime(str, enum.Enum):
    NON_EB_OR_BORDER = "NonEBorBorder"
    DEEP_EB = "DeepEB"


@dataclass(frozen=True)
class RegionVerdict:
    m_eb: float
    m_ad: float
    is_eb: bool
    is_ad: bool
    regime: Regime

    def as_dict(self) -> dict:
        return {
            "m_eb": self.m_eb,
            "m_ad": self.m_ad,
            "is_eb": self.is_eb,
            "is_ad": self.is_ad,
            "regime": self.regime.value,
        }


def is_deep_eb(c: Channel) -> bool:
    return c.M > m_eb(c.x)


def is_degenerate_reference(c: Channel) -> bool:
    """``x = 0`` references are absorbing; region answers for them follow the deep-EB convention."""
    return c.x == 0.0


def classify(c: Channel) -> RegionVerdict:
    eb, ad = m_eb(c.x), m_ad(c.x)
    return RegionVerdict(
        m_eb=eb,
        m_ad=ad,
        is_eb=c.M >= eb,
        is_ad=c.M >= ad,
        regime=Regime.DEEP_EB if c.M > eb else Regime.NON_EB_OR_BORDER,
    )


# --- border functions -------------------------------------------------------


def border_f1(ref: Channel, xp: float) -> float:
    x, M = ref.x, ref.M
    return M + (1.0 - x) * heaviside(1.0 - x) + (xp - 1.0) * heaviside(1.0 - xp)


def border_f2(ref: Channel, xp: float) -> float:
    x, M = ref.x, ref.M
    if x == 0:
        raise DomainError("f2 is undefined for a reference with x = 0")
    return xp / x * (M + (x - 1.0) * heaviside(x - 1.0)) - (xp - 1.0) * heaviside(xp - 1.0)


def lower_border(ref: Channel, xp: float) -> float:
    """``max(f1, f2)``: the low-ground region lies on or above it."""
    return max(border_f1(ref, xp), border_f2(ref, xp))


def upper_border(ref: Channel, xp: float) -> float:
    """``min(f1, f2)``: the high-ground region lies on or below it."""
    return min(border_f1(ref, xp), border_f2(ref, xp))


@dataclass(frozen=True)
class BorderCurve:
    """The two border functions of a reference together with their piecewise-linear pieces.

    ``pieces`` lists ``(lo, hi, side, label)`` where ``side`` is ``"low"``
    (piece of ``max(f1, f2)``) or ``"high"`` (piece of ``min(f1, f2)``) and
    ``label`` names the closed-form border line ``M(j)`` (see :func:`border_line`) the piece follows. ``hi`` may
    be ``inf``.
    """

    ref: Channel
    pieces: tuple = field(default=())

    def f1(self, xp: float) -> float:
        return border_f1(self.ref, xp)

    def f2(self, xp: float) -> float:
        return border_f2(self.ref, xp)

    def lower(self, xp: float) -> float:
        return lower_border(self.ref, xp)

    def upper(self, xp: float) -> float:
        return upper_border(self.ref, xp)

    def piece_at(self, xp: float, side: str) -> tuple:
        for piece in self.pieces:
            lo, hi, s, _ = piece
            if s == side and lo <= xp <= hi:
                return piece
        raise DomainError(f"no {side} border piece covers x' = {xp}")


def border_curve(ref: Channel) -> BorderCurve:
    x = ref.x
    inf = float("inf")
    if x == 0:
        raise DegenerateError("border curves are undefined for a reference with x = 0")
    if x <= 1:
        pieces = (
            (0.0, x, "low", "M1"),
            (x, 1.0, "low", "M2"),
            (1.0, inf, "low", "M4"),
            (0.0, x, "high", "M2"),
            (x, 1.0, "high", "M1"),
            (1.0, inf, "high", "M3"),
        )
    else:
        pieces = (
            (0.0, 1.0, "low", "M4"),
            (1.0, x, "low", "M2"),
            (x, inf, "low", "M1"),
            (0.0, 1.0, "high", "M3"),
            (1.0, x, "high", "M1"),
            (x, inf, "high", "M2"),
        )
    return BorderCurve(ref, pieces)


# --- membership -------------------------------------------------------------


def _deep_eb_rules(ref: Channel) -> bool:
    return ref.x == 0 or is_deep_eb(ref)


def in_low_ground(ref: Channel, p: Channel, atol: float = BORDER_ATOL) -> bool:
    """Whether ``p`` can be obtained from ``ref`` by pre- and post-processing.

    Border comparisons are closed and widened by ``atol`` so that points
    lying on a border in exact arithmetic are accepted. The strict deep-EB
    test ``M' > min(1, x')`` involves no roundoff and is applied exactly.
    """
    if p.x == 0:
        return True
    if _deep_eb_rules(ref):
        return p.M > m_eb(p.x)
    return p.M >= lower_border(ref, p.x) - atol


def in_high_ground(ref: Channel, p: Channel, atol: float = BORDER_ATOL) -> bool:
    """Whether ``ref`` can be obtained from ``p`` by pre- and post-processing."""
    if _deep_eb_rules(ref):
        return True
    if p.x == 0:
        # (0, M') only reaches channels with x = 0
        return False
    return p.M <= upper_border(ref, p.x) + atol


def complementarity_check(a: Channel, b: Channel) -> bool:
    return in_high_ground(a, b) == in_low_ground(b, a)


# --- two-element border functions -------------------------------------------


class BorderFunctions(NamedTuple):
    """The four border curves ``N(1)..N(4)`` of a thermal attenuator or amplifier.

    Values are returned unclamped; a negative value means the corresponding
    region slice is empty.
    """

    n1: Callable[[float], float]
    n2: Callable[[float], float]
    n3: Callable[[float], float]
    n4: Callable[[float], float]


def two_element_borders_att(eta: float, N: float) -> BorderFunctions:
    """Border curves of the attenuator ``E(eta, N)``.

    ``n1``, ``n2`` take an attenuator transmissivity ``eta'``, ``n3``, ``n4``
    an amplifier gain ``g``.
    """
    if not 0 < eta < 1:
        raise DomainError(f"eta must lie in (0, 1), got {eta!r}")
    if N < 0:
        raise DomainError(f"N must be non-negative, got {N!r}")
    r = (1.0 - eta) / eta
    return BorderFunctions(
        n1=lambda ep: N * r * (ep / (1.0 - ep)),
        n2=lambda ep: (N + 1.0) * ((1.0 - eta) / (1.0 - ep)) - 1.0,
        n3=lambda g: N * r * (g / (g - 1.0)) - 1.0,
        n4=lambda g: (N + 1.0) * ((1.0 - eta) / (g - 1.0)),
    )


def two_element_borders_amp(g: float, N: float) -> BorderFunctions:
    """Border curves of the amplifier ``A(g, N)``; ``n1``, ``n2`` take a gain, ``n3``, ``n4`` a transmissivity."""
    if not g > 1:
        raise DomainError(f"g must be > 1, got {g!r}")
    if N < 0:
        raise DomainError(f"N must be non-negative, got {N!r}")
    r = (g - 1.0) / g
    return BorderFunctions(
        n1=lambda gp: N * ((g - 1.0) / (gp - 1.0)),
        n2=lambda gp: (N + 1.0) * r * (gp / (gp - 1.0)) - 1.0,
        n3=lambda ep: N * ((g - 1.0) / (1.0 - ep)) - 1.0,
        n4=lambda ep: (N + 1.0) * r * (ep / (1.0 - ep)),
    )


def border_line(ref: Channel, j: int, xp: float) -> float:
    """Closed-form border line ``M(j)(x')`` of the two-element regions.

    Curves 1 and 2 apply when ``x`` and ``x'`` lie on the same side of 1,
    curves 3 and 4 when they lie on opposite sides (either side when equal
    to 1, where the formulas agree).
    """
    x, M = ref.x, ref.M
    if j not in (1, 2, 3, 4):
        raise DomainError(f"border index must be 1..4, got {j!r}")
    if x <= 0 or xp < 0:
        raise DomainError("border_line needs x > 0 and x' >= 0")
    if j in (1, 2):
        if x <= 1 and xp <= 1:
            return M * xp / x if j == 1 else M - x + xp
        if x >= 1 and xp >= 1:
            return M if j == 1 else (M - 1.0) * xp / x + 1.0
    else:
        if x <= 1 and xp >= 1:
            return (M - x) * xp / x + 1.0 if j == 3 else M + 1.0 - x
        if x >= 1 and xp <= 1:
            return M - 1.0 + xp if j == 3 else (M + x - 1.0) * xp / x
    raise DomainError(f"curve M({j}) does not apply at x = {x}, x' = {xp}")


# --- witnesses --------------------------------------------------------------


@dataclass(frozen=True)
class Witness:
    """Factors with ``target == post o ref o pre`` (``pre`` applied first)."""

    ref: Channel
    target: Channel
    pre: Channel
    post: Channel
    mid: Optional[Channel]
    residual: float
    case: str

    @property
    def single_factor(self) -> bool:
        return self.pre == IDENTITY or self.post == IDENTITY

    def as_dict(self) -> dict:
        return {
            "ref": self.ref.as_dict(),
            "target": self.target.as_dict(),
            "pre": self.pre.as_dict(),
            "post": self.post.as_dict(),
            "mid": None if self.mid is None else self.mid.as_dict(),
            "residual": self.residual,
            "case": self.case,
            "order": "target = post o ref o pre (pre applied first)",
        }


def reconstruct(pre: Channel, ref: Channel, post: Channel) -> Channel:
    return compose(compose(pre, ref), post)


def _residual(a: Channel, b: Channel) -> float:
    return max(abs(a.x - b.x), abs(a.M - b.M))


def _single_factor(ref: Channel, p: Channel) -> tuple:
    """Pre/post factor pair for a target in the low-ground region of a reference with ``x > 0``.

    The four cases follow the sign of ``x - 1`` and ``x' - x``. The formulas
    are composition identities and hold for any reference; the membership
    test guarantees a non-negative factor noise.
    """
    x, M = ref.x, ref.M
    xp, Mp = p.x, p.M
    xbar = xp / x
    if x <= 1:
        if xp <= x:
            return IDENTITY, Channel(xbar, max(Mp - xbar * M, 0.0)), "a"
        return Channel(xbar, max((Mp - border_f1(ref, xp)) / x, 0.0)), IDENTITY, "b"
    if xp >= x:
        return Channel(xbar, max((Mp - M) / x, 0.0)), IDENTITY, "c"
    j = 4 if xp <= 1 else 2
    return IDENTITY, Channel(xbar, max(Mp - border_line(ref, j, xp), 0.0)), "d"


def _deep_eb_midpoint(ref: Channel, p: Channel) -> Channel:
    """Intermediate channel reachable from ``ref`` that can itself be turned into ``p``.

    It sits on the line ``M'' = x'' (M + max(x - 1, 0)) / x`` through the
    origin (reachable from ``ref`` with a noiseless post-factor) and close
    enough to the origin to stay below ``M' + x'' - min(x', 1)`` (so that
    ``p`` is reachable from it with a pre-factor).
    """
    x, M = ref.x, ref.M
    slope_num = M + max(x - 1.0, 0.0)
    slack = p.M - m_eb(p.x)
    s = min(0.5, slack / (slope_num + 1.0))
    x_mid = min(x, 1.0, p.x) * s
    return Channel(x_mid, x_mid * slope_num / x)


def witness_low_ground(ref: Channel, p: Channel) -> Witness:
    """Explicit factors realising ``p`` from ``ref``; raises if ``p`` is not low-ground."""
    if not in_low_ground(ref, p):
        raise NotInRegionError(f"{p} is not in the low-ground region of {ref}")
    if p.x == 0:
        pre, post, mid, case = IDENTITY, Channel(0.0, p.M), None, "x'=0"
    elif ref.x == 0:
        raise DegenerateError("no witness from a reference with x = 0 to a target with x > 0")
    elif is_deep_eb(ref):
        mid = _deep_eb_midpoint(ref, p)
        _, post, _ = _single_factor(ref, mid)
        pre, _, _ = _single_factor(mid, p)
        case = "deep-eb"
    else:
        pre, post, case = _single_factor(ref, p)
        mid = None
    rec = reconstruct(pre, ref, post)
    return Witness(ref, p, pre, post, mid, _residual(rec, p), case)
