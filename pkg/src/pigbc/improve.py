"""Improved upper bounds from minimising a bound over the high-ground region.

A bound evaluated anywhere in ``H(x, M)`` bounds the capacity of ``(x, M)``
too, so its minimum over ``H`` is a valid (possibly tighter) bound. The
concrete case implemented here is the degradable-extension bound, split into the piece with
``x' <= 1`` (``Q1``, minimised numerically) and the piece with ``x' >= 1``
(``Q2``, in closed form).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .bounds import degext_amp_upper, degext_att_upper, report, twist_upper
from .channel import Channel
from .errors import DegenerateError, PreconditionError
from .regions import BORDER_ATOL, border_curve, is_deep_eb, lower_border, m_eb, upper_border
from .search import DEFAULT_GRID, DEFAULT_TOL, scan_then_golden

__all__ = [
    "Branch",
    "ImprovedBound",
    "EPS_MIN",
    "DELTA",
    "check_not_ad",
    "m_max_gt",
    "q1_objective",
    "q1_2_objective",
    "improved_q1",
    "improved_q2",
    "improved_upper",
    "minimize_over_high_ground",
    "maximize_over_low_ground",
    "Envelope",
    "ENVELOPE_LABELS",
    "best_upper_envelope",
]

EPS_MIN = 1e-9  # guard for the x >= 1 branch, where N = (1 - eps)/eps diverges at eps = 0
DELTA = 1e-9  # Q1_2 runs over x' in [x, 1 - DELTA]

BoundFunction = Callable[[float, float], float]


class Branch(str, enum.Enum):
    Q1_1 = "Q1_1"
    Q1_2 = "Q1_2"
    Q2 = "Q2"
    COMBINED = "Combined"


@dataclass(frozen=True)
class ImprovedBound:
    value: float
    argmin: Channel
    branch: Branch
    iterations: int
    tolerance_met: bool

    def as_dict(self) -> dict:
        return {
            "value": None if math.isinf(self.value) else self.value,
            "unbounded": math.isinf(self.value),
            "argmin": self.argmin.as_dict(),
            "branch": self.branch.value,
            "iterations": self.iterations,
            "tolerance_met": self.tolerance_met,
        }


def check_not_ad(c: Channel) -> None:
    """Raise unless ``x >= 1/2`` and ``M <= min(x - 1/2, 1/2)`` (the AD border itself is allowed)."""
    if not (c.x >= 0.5 and c.M <= min(c.x - 0.5, 0.5) + BORDER_ATOL):
        raise PreconditionError(f"{c} lies inside the anti-degradable set, where Q = 0")


def m_max_gt(c: Channel) -> float:
    """Largest ``M'`` among high-ground points with ``x' >= 1``: ``M / min(1, x)``."""
    check_not_ad(c)
    return c.M / m_eb(c.x)


def _on_upper_border(c: Channel, xp: float) -> Channel:
    return Channel(xp, max(upper_border(c, xp), 0.0))


def q1_objective(c: Channel, eps):
    """Degradable-extension attenuator bound along the ``x' <= x`` high-ground border, parametrised by ``eps`` in [0, 1].

    ``eps = 0`` is the reference itself, ``eps = 1`` the pure-loss corner
    ``(x - M, 0)``. For ``x >= 1`` the border runs from ``(1, M)`` to
    ``(1 - M, 0)``. Vectorised over ``eps``.
    """
    x, M = c.x, c.M
    eps = np.asarray(eps, dtype=float)
    if x < 1:
        loss = 1.0 - x + eps * M
        return degext_att_upper(x - eps * M, (1.0 - eps) * M / loss, loss=loss)
    eps = np.maximum(eps, EPS_MIN)
    return degext_att_upper(1.0 - eps * M, (1.0 - eps) / eps, loss=eps * M)


def q1_2_objective(c: Channel, xp):
    """Degradable-extension attenuator bound along the ``x <= x' < 1`` high-ground border."""
    xp = np.asarray(xp, dtype=float)
    return degext_att_upper(xp, xp * c.M / ((1.0 - xp) * c.x))


def improved_q1(c: Channel, tol: float = DEFAULT_TOL, grid: int = DEFAULT_GRID) -> ImprovedBound:
    check_not_ad(c)
    x, M = c.x, c.M
    if x >= 1 and M == 0:
        # the x' <= 1 part of H collapses to the identity channel
        return ImprovedBound(math.inf, Channel(1.0, 0.0), Branch.Q1_1, 0, True)

    lo = 0.0 if x < 1 else EPS_MIN
    r11 = scan_then_golden(lambda e: q1_objective(c, e), lo, 1.0, grid=grid, tol=tol, vectorized=True)
    xp11 = x - r11.x * M if x < 1 else 1.0 - r11.x * M
    best = ImprovedBound(r11.value, _on_upper_border(c, xp11), Branch.Q1_1, r11.iterations, r11.converged)

    if x < 1.0 - DELTA:
        r12 = scan_then_golden(
            lambda t: q1_2_objective(c, t), x, 1.0 - DELTA, grid=grid, tol=tol, vectorized=True
        )
        if r12.value < best.value:
            best = ImprovedBound(
                r12.value, _on_upper_border(c, r12.x), Branch.Q1_2, r12.iterations, r12.converged
            )
    return best


def improved_q2(c: Channel) -> ImprovedBound:
    """Amplifier degradable-extension bound at the top of the ``x' >= 1`` part of H, where it is smallest."""
    value = degext_amp_upper(m_max_gt(c))
    return ImprovedBound(value, _on_upper_border(c, 1.0), Branch.Q2, 0, True)


def improved_upper(c: Channel, tol: float = DEFAULT_TOL, grid: int = DEFAULT_GRID) -> ImprovedBound:
    q1 = improved_q1(c, tol=tol, grid=grid)
    q2 = improved_q2(c)
    return q1 if q1.value < q2.value else q2


# --- generic region extremisation ----------------------------------------------


def _high_ground_span(c: Channel, x_max: float) -> tuple:
    x, M = c.x, c.M
    if x <= 1:
        lo = max(0.0, x - M)
        hi = x / (x - M) if M < x else math.inf
    else:
        lo = max(0.0, 1.0 - M)
        hi = x / (1.0 - M) if M < 1 else math.inf
    return lo, min(hi, x_max)


def _check_region_reference(c: Channel) -> None:
    if c.x == 0:
        raise DegenerateError("regions of an x = 0 reference are degenerate")
    if is_deep_eb(c):
        raise DegenerateError("deep-EB reference: H is the whole plane and L the EB set")


def _non_increasing_in_m(f: BoundFunction, xs, tops, bottoms, samples: int = 5) -> bool:
    for xp, top, bot in zip(xs, tops, bottoms):
        ms = np.linspace(bot, top, samples)
        vals = [f(xp, m) for m in ms]
        if any(b > a + 1e-12 for a, b in zip(vals, vals[1:]) if math.isfinite(a) and math.isfinite(b)):
            return False
    return True


def _extremise_along(f, c, pieces, lo, hi, border, sign, grid, tol):
    """Minimise ``sign * f`` along ``M' = border(x')`` over the given pieces clipped to ``[lo, hi]``."""
    best_v, best_p, iters, ok = math.inf, None, 0, True
    for a, b, _, _ in pieces:
        a, b = max(a, lo), min(b, hi)
        if b < a:
            continue

        def g(xp):
            v = f(xp, max(border(c, xp), 0.0))
            return sign * v if not math.isnan(v) else math.inf

        r = scan_then_golden(g, a, b, grid=grid, tol=tol)
        iters += r.iterations
        ok = ok and r.converged
        if r.value < best_v:
            best_v, best_p = r.value, Channel(r.x, max(border(c, r.x), 0.0))
    return best_v, best_p, iters, ok


def minimize_over_high_ground(
    c: Channel,
    f: BoundFunction,
    grid: int = DEFAULT_GRID,
    tol: float = DEFAULT_TOL,
    x_max: float = None,
) -> ImprovedBound:
    """Minimum of ``f(x', M')`` over the high-ground region of ``c``.

    When ``f`` is non-increasing in ``M'`` on sampled points of the region
    the minimum lies on the upper border, which is scanned piece by piece;
    otherwise a full 2-D grid over the region is used. ``x_max`` caps the
    region when it is unbounded to the right.
    """
    _check_region_reference(c)
    if x_max is None:
        x_max = max(2.0, 2.0 * c.x)
    lo, hi = _high_ground_span(c, x_max)
    pieces = [p for p in border_curve(c).pieces if p[2] == "high"]

    xs = np.linspace(lo, hi, 9)
    tops = [max(upper_border(c, t), 0.0) for t in xs]
    if _non_increasing_in_m(f, xs, tops, [0.0] * len(xs)):
        value, arg, iters, ok = _extremise_along(f, c, pieces, lo, hi, upper_border, 1.0, grid, tol)
    else:
        value, arg, iters, ok = math.inf, None, 0, True
        for xp in np.linspace(lo, hi, grid):
            top = max(upper_border(c, xp), 0.0)
            for mp in np.linspace(0.0, top, grid):
                v = f(float(xp), float(mp))
                if v < value:
                    value, arg = v, Channel(float(xp), float(mp))
    at_ref = f(c.x, c.M)
    if at_ref <= value:
        value, arg = at_ref, c
    return ImprovedBound(value, arg, Branch.COMBINED, iters, ok)


def maximize_over_low_ground(
    c: Channel,
    f: BoundFunction,
    grid: int = DEFAULT_GRID,
    tol: float = DEFAULT_TOL,
    x_max: float = None,
    m_window: float = 1.0,
) -> ImprovedBound:
    """Maximum of ``f(x', M')`` over the low-ground region of ``c`` within ``x' <= x_max``.

    Dual of :func:`minimize_over_high_ground`: for ``f`` non-increasing in
    ``M'`` the maximum lies on the lower border; otherwise the band of
    height ``m_window`` above the border is grid-searched.
    """
    _check_region_reference(c)
    if x_max is None:
        x_max = max(2.0, 2.0 * c.x)
    pieces = [p for p in border_curve(c).pieces if p[2] == "low"]

    xs = np.linspace(0.0, x_max, 9)
    bots = [max(lower_border(c, t), 0.0) for t in xs]
    tops = [b + m_window for b in bots]
    if _non_increasing_in_m(f, xs, tops, bots):
        value, arg, iters, ok = _extremise_along(f, c, pieces, 0.0, x_max, lower_border, -1.0, grid, tol)
        value = -value
    else:
        value, arg, iters, ok = -math.inf, None, 0, True
        for xp in np.linspace(0.0, x_max, grid):
            bot = max(lower_border(c, xp), 0.0)
            for mp in np.linspace(bot, bot + m_window, grid):
                v = f(float(xp), float(mp))
                if v > value:
                    value, arg = v, Channel(float(xp), float(mp))
    at_ref = f(c.x, c.M)
    if at_ref >= value:
        value, arg = at_ref, c
    return ImprovedBound(value, arg, Branch.COMBINED, iters, ok)


# --- best-upper envelope --------------------------------------------------------

ENVELOPE_LABELS = ("Q1", "Q2", "plob", "twist", "degext")
PUBLISHED = ("plob", "twist", "degext")
IMPROVEMENT_BITS = 1e-6  # margin for flagging a cell as a strict improvement


@dataclass(frozen=True)
class Envelope:
    """Pointwise comparison of all Q upper bounds at one channel.

    ``values`` maps each label of :data:`ENVELOPE_LABELS` to its value, or
    ``nan`` where the bound does not apply. ``label`` is the first label in
    :data:`ENVELOPE_LABELS` order within ``tol`` of the minimum, so the
    minimised bounds win ties against the bounds they contain as endpoints;
    it is ``"zero"`` on the anti-degradable set. ``improved`` marks cells
    where ``Q1`` or ``Q2`` beats every published bound by more than
    :data:`IMPROVEMENT_BITS`.
    """

    channel: Channel
    values: dict
    best: float
    label: str
    lower: float
    zero_q: bool
    zero_all: bool
    improved: bool = False
    q1_branch: str = ""


def best_upper_envelope(c: Channel, tol: float = DEFAULT_TOL, grid: int = DEFAULT_GRID) -> Envelope:
    rep = report(c)
    values = dict.fromkeys(ENVELOPE_LABELS, math.nan)
    for e in rep.q_p:
        if e.side != "upper" or not e.applicable or math.isnan(e.value):
            continue
        key = "degext" if e.name.startswith("degext") else e.name
        values[key] = e.value if math.isnan(values[key]) else min(values[key], e.value)
    if rep.zero_q:
        return Envelope(c, values, 0.0, "zero", 0.0, True, rep.zero_all)

    q1 = improved_q1(c, tol=tol, grid=grid)
    values["Q1"] = q1.value
    values["Q2"] = improved_q2(c).value
    finite = [v for v in values.values() if not math.isnan(v)]
    best = min(finite)
    label = next(k for k in ENVELOPE_LABELS if not math.isnan(values[k]) and values[k] <= best + tol)
    published = min([values[k] for k in PUBLISHED if not math.isnan(values[k])], default=math.inf)
    improved = min(values["Q1"], values["Q2"]) < published - IMPROVEMENT_BITS
    return Envelope(c, values, best, label, rep.best_lower_q, False, rep.zero_all, improved, q1.branch.value)
